#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>

namespace kserver {

/// Exact value in scaled integer units (see MetricSpace::scale).
using Value = std::int64_t;
using PointId = std::int32_t;

inline constexpr int kMaxServers = 8;

/// A multiset of server positions, always kept in sorted order so that equal
/// multisets compare equal structurally.
class Configuration {
 public:
  Configuration() = default;
  Configuration(std::initializer_list<PointId> points);
  explicit Configuration(std::span<const PointId> points);

  static Configuration repeated(PointId p, int copies);

  int size() const { return size_; }
  bool empty() const { return size_ == 0; }
  PointId operator[](int i) const { return points_[static_cast<std::size_t>(i)]; }
  const PointId* begin() const { return points_.data(); }
  const PointId* end() const { return points_.data() + size_; }
  std::span<const PointId> points() const { return {begin(), end()}; }

  int count(PointId p) const;
  bool contains(PointId p) const { return count(p) > 0; }

  Configuration with(PointId p) const;
  // Removes one copy of p; throws if p is absent.
  Configuration without(PointId p) const;
  Configuration without_at(int pos) const;
  Configuration replaced(PointId out, PointId in) const { return without(out).with(in); }

  bool includes(const Configuration& sub) const;
  // Multiset difference; copies in `sub` that are missing here are ignored.
  Configuration minus(const Configuration& sub) const;
  Configuration plus(const Configuration& other) const;

  friend bool operator==(const Configuration& a, const Configuration& b) {
    return a.points().size() == b.points().size() &&
           std::equal(a.begin(), a.end(), b.begin());
  }
  friend std::strong_ordering operator<=>(const Configuration& a, const Configuration& b);

 private:
  std::array<PointId, kMaxServers> points_{};
  std::int8_t size_ = 0;
};

std::string to_string(const Configuration& c);

}  // namespace kserver

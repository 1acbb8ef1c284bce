#include "kserver/configuration.hpp"

#include <algorithm>

#include "kserver/error.hpp"

namespace kserver {

Configuration::Configuration(std::initializer_list<PointId> points)
    : Configuration(std::span<const PointId>(points.begin(), points.size())) {}

Configuration::Configuration(std::span<const PointId> points) {
  require(points.size() <= static_cast<std::size_t>(kMaxServers),
          "configuration larger than " + std::to_string(kMaxServers) + " servers");
  std::copy(points.begin(), points.end(), points_.begin());
  size_ = static_cast<std::int8_t>(points.size());
  std::sort(points_.begin(), points_.begin() + size_);
}

Configuration Configuration::repeated(PointId p, int copies) {
  require(copies >= 0 && copies <= kMaxServers, "bad copy count");
  Configuration c;
  std::fill(c.points_.begin(), c.points_.begin() + copies, p);
  c.size_ = static_cast<std::int8_t>(copies);
  return c;
}

int Configuration::count(PointId p) const {
  return static_cast<int>(std::count(begin(), end(), p));
}

Configuration Configuration::with(PointId p) const {
  require(size_ < kMaxServers, "configuration full");
  Configuration c = *this;
  auto* pos = std::upper_bound(c.points_.data(), c.points_.data() + size_, p);
  std::copy_backward(pos, c.points_.data() + size_, c.points_.data() + size_ + 1);
  *pos = p;
  ++c.size_;
  return c;
}

Configuration Configuration::without(PointId p) const {
  auto* it = std::find(begin(), end(), p);
  if (it == end()) fail(ErrorKind::invalid_input, "point " + std::to_string(p) + " not in " + to_string(*this));
  return without_at(static_cast<int>(it - begin()));
}

Configuration Configuration::without_at(int pos) const {
  require(pos >= 0 && pos < size_, "position out of range");
  Configuration c = *this;
  std::copy(c.points_.begin() + pos + 1, c.points_.begin() + size_, c.points_.begin() + pos);
  --c.size_;
  c.points_[static_cast<std::size_t>(c.size_)] = 0;
  return c;
}

bool Configuration::includes(const Configuration& sub) const {
  return std::includes(begin(), end(), sub.begin(), sub.end());
}

Configuration Configuration::minus(const Configuration& sub) const {
  std::array<PointId, kMaxServers> out{};
  auto* last = std::set_difference(begin(), end(), sub.begin(), sub.end(), out.begin());
  return Configuration(std::span<const PointId>(out.data(), static_cast<std::size_t>(last - out.data())));
}

Configuration Configuration::plus(const Configuration& other) const {
  require(size_ + other.size_ <= kMaxServers, "configuration full");
  std::array<PointId, 2 * kMaxServers> out{};
  auto* last = std::merge(begin(), end(), other.begin(), other.end(), out.begin());
  return Configuration(std::span<const PointId>(out.data(), static_cast<std::size_t>(last - out.data())));
}

std::strong_ordering operator<=>(const Configuration& a, const Configuration& b) {
  return std::lexicographical_compare_three_way(a.begin(), a.end(), b.begin(), b.end());
}

std::string to_string(const Configuration& c) {
  std::string out = "{";
  for (int i = 0; i < c.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(c[i]);
  }
  return out + "}";
}

}  // namespace kserver

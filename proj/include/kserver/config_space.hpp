#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "kserver/configuration.hpp"
#include "kserver/metric.hpp"

namespace kserver {

class ConfigSpace;
using ConfigSpacePtr = std::shared_ptr<const ConfigSpace>;

/// All k-point multisets of a metric space, addressed by colexicographic rank.
///
/// A sorted multiset a_0 <= ... <= a_{k-1} has rank sum_i C(a_i + i, i + 1),
/// which enumerates the C(n+k-1, k) configurations without gaps.
class ConfigSpace {
 public:
  static ConfigSpacePtr create(SpacePtr metric, int k);

  const MetricSpace& metric() const { return *metric_; }
  const SpacePtr& metric_ptr() const { return metric_; }
  int k() const { return k_; }
  int num_points() const { return n_; }
  std::size_t size() const { return configs_.size(); }

  const Configuration& at(std::size_t idx) const { return configs_[idx]; }
  std::size_t index_of(const Configuration& c) const;
  std::size_t rank_sorted(const PointId* sorted) const;

  /// Rank of at(idx) with its element at `pos` replaced by p.
  std::size_t replace(std::size_t idx, int pos, PointId p) const {
    if (!swap_.empty())
      return swap_[(idx * static_cast<std::size_t>(k_) + static_cast<std::size_t>(pos)) *
                       static_cast<std::size_t>(n_) +
                   static_cast<std::size_t>(p)];
    return replace_slow(idx, pos, p);
  }

  Value distance(std::size_t a, std::size_t b) const;
  /// d(y^k, C): total distance from y to the points of C.
  Value distance_from_point(std::size_t idx, PointId y) const;

 private:
  ConfigSpace(SpacePtr metric, int k);
  std::size_t replace_slow(std::size_t idx, int pos, PointId p) const;

  SpacePtr metric_;
  int k_;
  int n_;
  std::vector<std::vector<std::uint64_t>> binom_;  // binom_[a][b] = C(a, b)
  std::vector<Configuration> configs_;
  std::vector<std::uint32_t> swap_;
};

}  // namespace kserver

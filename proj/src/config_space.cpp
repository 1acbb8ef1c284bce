#include "kserver/config_space.hpp"

#include <algorithm>

#include "kserver/error.hpp"

namespace kserver {

namespace {
constexpr std::size_t kSwapTableLimit = std::size_t{1} << 22;
}

ConfigSpacePtr ConfigSpace::create(SpacePtr metric, int k) {
  return ConfigSpacePtr(new ConfigSpace(std::move(metric), k));
}

ConfigSpace::ConfigSpace(SpacePtr metric, int k) : metric_(std::move(metric)), k_(k), n_(metric_->size()) {
  require(k >= 1 && k <= kMaxServers, "k must lie in 1.." + std::to_string(kMaxServers));
  const int top = n_ + k_;
  binom_.assign(static_cast<std::size_t>(top + 1), std::vector<std::uint64_t>(static_cast<std::size_t>(k_ + 2), 0));
  for (int a = 0; a <= top; ++a) {
    binom_[static_cast<std::size_t>(a)][0] = 1;
    for (int b = 1; b <= k_ + 1 && b <= a; ++b)
      binom_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
          binom_[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(b - 1)] +
          (b <= a - 1 ? binom_[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(b)] : 0);
  }
  const std::uint64_t total = binom_[static_cast<std::size_t>(n_ + k_ - 1)][static_cast<std::size_t>(k_)];
  if (total > (std::uint64_t{1} << 31))
    fail(ErrorKind::unsupported, "configuration space too large: " + std::to_string(total) + " entries");
  configs_.resize(total);

  std::array<PointId, kMaxServers> cur{};
  // Odometer over nondecreasing sequences.
  for (;;) {
    configs_[rank_sorted(cur.data())] = Configuration(std::span<const PointId>(cur.data(), static_cast<std::size_t>(k_)));
    int i = k_ - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == n_ - 1) --i;
    if (i < 0) break;
    PointId v = cur[static_cast<std::size_t>(i)] + 1;
    for (int j = i; j < k_; ++j) cur[static_cast<std::size_t>(j)] = v;
  }

  const std::size_t entries = configs_.size() * static_cast<std::size_t>(k_) * static_cast<std::size_t>(n_);
  if (entries <= kSwapTableLimit) {
    swap_.resize(entries);
    for (std::size_t idx = 0; idx < configs_.size(); ++idx)
      for (int pos = 0; pos < k_; ++pos)
        for (PointId p = 0; p < n_; ++p)
          swap_[(idx * static_cast<std::size_t>(k_) + static_cast<std::size_t>(pos)) * static_cast<std::size_t>(n_) +
                static_cast<std::size_t>(p)] = static_cast<std::uint32_t>(replace_slow(idx, pos, p));
  }
}

std::size_t ConfigSpace::rank_sorted(const PointId* sorted) const {
  std::size_t r = 0;
  for (int i = 0; i < k_; ++i)
    r += binom_[static_cast<std::size_t>(sorted[i] + i)][static_cast<std::size_t>(i + 1)];
  return r;
}

std::size_t ConfigSpace::index_of(const Configuration& c) const {
  if (c.size() != k_)
    fail(ErrorKind::invalid_input, "configuration " + to_string(c) + " does not have " + std::to_string(k_) + " points");
  for (PointId p : c)
    if (p < 0 || p >= n_) fail(ErrorKind::invalid_input, "point " + std::to_string(p) + " outside the space");
  return rank_sorted(c.begin());
}

std::size_t ConfigSpace::replace_slow(std::size_t idx, int pos, PointId p) const {
  std::array<PointId, kMaxServers> pts{};
  const Configuration& c = configs_[idx];
  std::copy(c.begin(), c.end(), pts.begin());
  pts[static_cast<std::size_t>(pos)] = p;
  // One element moved; restore order by bubbling it into place.
  int i = pos;
  while (i > 0 && pts[static_cast<std::size_t>(i - 1)] > pts[static_cast<std::size_t>(i)]) {
    std::swap(pts[static_cast<std::size_t>(i - 1)], pts[static_cast<std::size_t>(i)]);
    --i;
  }
  while (i + 1 < k_ && pts[static_cast<std::size_t>(i + 1)] < pts[static_cast<std::size_t>(i)]) {
    std::swap(pts[static_cast<std::size_t>(i + 1)], pts[static_cast<std::size_t>(i)]);
    ++i;
  }
  return rank_sorted(pts.data());
}

Value ConfigSpace::distance(std::size_t a, std::size_t b) const {
  return matching_distance(configs_[a], configs_[b], *metric_);
}

Value ConfigSpace::distance_from_point(std::size_t idx, PointId y) const {
  Value total = 0;
  for (PointId p : configs_[idx]) total += metric_->distance(p, y);
  return total;
}

}  // namespace kserver

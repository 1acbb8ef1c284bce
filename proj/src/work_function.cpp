#include "kserver/work_function.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "kserver/error.hpp"

namespace kserver {

WorkFunction::WorkFunction(ConfigSpacePtr configs, std::vector<Value> values, std::optional<PointId> last_request,
                           Origin origin)
    : configs_(std::move(configs)), values_(std::move(values)), last_request_(last_request), origin_(origin) {
  require(configs_ != nullptr, "work function needs a configuration space");
  if (values_.size() != configs_->size())
    fail(ErrorKind::invalid_input, "work function has " + std::to_string(values_.size()) + " values, expected " +
                                       std::to_string(configs_->size()));
  if (last_request_) require(*last_request_ >= 0 && *last_request_ < configs_->num_points(), "last request out of range");
}

WorkFunction WorkFunction::cone(ConfigSpacePtr configs, const Configuration& c0) {
  configs->index_of(c0);
  std::vector<Value> values(configs->size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = matching_distance(c0, configs->at(i), configs->metric());
  return WorkFunction(std::move(configs), std::move(values), std::nullopt, Origin::reachable);
}

Value WorkFunction::min_value() const { return *std::min_element(values_.begin(), values_.end()); }

WorkFunction update(const WorkFunction& w, PointId r) {
  const ConfigSpace& cs = w.configs();
  if (r < 0 || r >= cs.num_points()) fail(ErrorKind::invalid_input, "request " + std::to_string(r) + " outside the space");
  const MetricSpace& m = cs.metric();
  const int k = cs.k();
  std::vector<Value> out(w.size());
  for (std::size_t idx = 0; idx < w.size(); ++idx) {
    const Configuration& c = cs.at(idx);
    Value best = std::numeric_limits<Value>::max();
    for (int pos = 0; pos < k; ++pos) {
      if (pos > 0 && c[pos] == c[pos - 1]) continue;
      best = std::min(best, w.at(cs.replace(idx, pos, r)) + m.distance(c[pos], r));
    }
    out[idx] = best;
  }
  return WorkFunction(w.configs_ptr(), std::move(out), r, w.origin());
}

SupportSet support(const WorkFunction& w) {
  const ConfigSpace& cs = w.configs();
  const MetricSpace& m = cs.metric();
  const int k = cs.k(), n = cs.num_points();
  SupportSet s;
  for (std::size_t idx = 0; idx < w.size(); ++idx) {
    const Configuration& c = cs.at(idx);
    bool supported = false;
    for (int pos = 0; pos < k && !supported; ++pos) {
      if (pos > 0 && c[pos] == c[pos - 1]) continue;
      for (PointId y = 0; y < n && !supported; ++y) {
        std::size_t other = cs.replace(idx, pos, y);
        if (other != idx && w.at(idx) == w.at(other) + m.distance(c[pos], y)) supported = true;
      }
    }
    if (!supported) {
      s.members.push_back(idx);
      s.values.push_back(w.at(idx));
    }
  }
  return s;
}

std::vector<Value> reconstruct_from_support(const ConfigSpace& configs, const SupportSet& s) {
  require(!s.members.empty(), "empty support");
  std::vector<Value> out(configs.size(), std::numeric_limits<Value>::max());
  for (std::size_t i = 0; i < s.members.size(); ++i) {
    const Configuration& y = configs.at(s.members[i]);
    for (std::size_t idx = 0; idx < configs.size(); ++idx)
      out[idx] = std::min(out[idx], s.values[i] + matching_distance(y, configs.at(idx), configs.metric()));
  }
  return out;
}

// Any matching decomposes into single-point moves, so the pairwise condition
// follows from the single-exchange one by the triangle inequality.
Verdict<PairWitness> is_lipschitz(const WorkFunction& w) {
  const ConfigSpace& cs = w.configs();
  const MetricSpace& m = cs.metric();
  for (std::size_t idx = 0; idx < w.size(); ++idx) {
    const Configuration& c = cs.at(idx);
    for (int pos = 0; pos < cs.k(); ++pos)
      for (PointId y = 0; y < cs.num_points(); ++y) {
        std::size_t other = cs.replace(idx, pos, y);
        if (w.at(idx) - w.at(other) > m.distance(c[pos], y)) return {false, PairWitness{c, cs.at(other)}};
      }
  }
  return {};
}

namespace {

struct ExchangeChecker {
  const WorkFunction& w;
  const ConfigSpace& cs;
  int k;

  std::size_t index(std::array<PointId, kMaxServers> pts) const {
    std::sort(pts.begin(), pts.begin() + k);
    return cs.rank_sorted(pts.data());
  }

  // The exchange inequality for all A with mu given as x[i] -> y[perm[i]].
  // A and its complement give the same pair of terms, so A never contains position 0.
  bool holds(const Configuration& x, const Configuration& y, const std::array<int, kMaxServers>& perm, Value sum) const {
    const unsigned full = 1u << k;
    for (unsigned mask = 0; mask < full; mask += 2) {
      std::array<PointId, kMaxServers> left{}, right{};
      for (int i = 0; i < k; ++i) {
        const bool in_a = mask >> i & 1u;
        const PointId mapped = y[perm[static_cast<std::size_t>(i)]];
        left[static_cast<std::size_t>(i)] = in_a ? x[i] : mapped;
        right[static_cast<std::size_t>(i)] = in_a ? mapped : x[i];
      }
      if (w.at(index(left)) + w.at(index(right)) > sum) return false;
    }
    return true;
  }

  bool restricted(const Configuration& x, const Configuration& y, Value sum) const {
    // Pair up common points first, then try every bijection of the rest.
    std::array<int, kMaxServers> perm{};
    std::array<bool, kMaxServers> used{};
    std::vector<int> free_x, free_y;
    for (int i = 0; i < k; ++i) {
      int match = -1;
      for (int j = 0; j < k && match < 0; ++j)
        if (!used[static_cast<std::size_t>(j)] && y[j] == x[i]) match = j;
      if (match >= 0) {
        used[static_cast<std::size_t>(match)] = true;
        perm[static_cast<std::size_t>(i)] = match;
      } else {
        free_x.push_back(i);
      }
    }
    for (int j = 0; j < k; ++j)
      if (!used[static_cast<std::size_t>(j)]) free_y.push_back(j);
    do {
      for (std::size_t t = 0; t < free_x.size(); ++t) perm[static_cast<std::size_t>(free_x[t])] = free_y[t];
      if (holds(x, y, perm, sum)) return true;
    } while (std::next_permutation(free_y.begin(), free_y.end()));
    return false;
  }

  bool unrestricted(const Configuration& x, const Configuration& y, Value sum) const {
    std::array<int, kMaxServers> perm{};
    std::iota(perm.begin(), perm.begin() + k, 0);
    do {
      if (holds(x, y, perm, sum)) return true;
    } while (std::next_permutation(perm.begin(), perm.begin() + k));
    return false;
  }
};

}  // namespace

Verdict<PairWitness> is_quasiconvex(const WorkFunction& w) {
  const ConfigSpace& cs = w.configs();
  const int k = cs.k();
  if (k > 5) fail(ErrorKind::unsupported, "quasiconvexity check supports k <= 5, got k = " + std::to_string(k));
  if (k == 1) return {};
  ExchangeChecker checker{w, cs, k};
  for (std::size_t a = 0; a < w.size(); ++a)
    for (std::size_t b = a + 1; b < w.size(); ++b) {
      const Configuration& x = cs.at(a);
      const Configuration& y = cs.at(b);
      const Value sum = w.at(a) + w.at(b);
      if (checker.restricted(x, y, sum) || checker.unrestricted(x, y, sum)) continue;
      return {false, PairWitness{x, y}};
    }
  return {};
}

std::vector<Configuration> minimizers(const WorkFunction& w, PointId y) {
  const ConfigSpace& cs = w.configs();
  Value best = std::numeric_limits<Value>::max();
  std::vector<Configuration> out;
  for (std::size_t idx = 0; idx < w.size(); ++idx) {
    Value v = w.at(idx) - cs.distance_from_point(idx, y);
    if (v < best) {
      best = v;
      out.clear();
    }
    if (v == best) out.push_back(cs.at(idx));
  }
  return out;
}

Value extended_cost(const WorkFunction& before, const WorkFunction& after) {
  require(before.size() == after.size(), "work functions over different spaces");
  Value best = std::numeric_limits<Value>::min();
  for (std::size_t i = 0; i < before.size(); ++i) best = std::max(best, after.at(i) - before.at(i));
  return best;
}

Value extended_cost(const WorkFunction& w, PointId r) { return extended_cost(w, update(w, r)); }

bool check_duality(const WorkFunction& w, PointId r) {
  const ConfigSpace& cs = w.configs();
  const WorkFunction next = update(w, r);
  Value min_lhs = std::numeric_limits<Value>::max(), max_gain = std::numeric_limits<Value>::min(),
        min_low = std::numeric_limits<Value>::max();
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Value dr = cs.distance_from_point(i, r);
    min_lhs = std::min(min_lhs, w.at(i) - dr);
    max_gain = std::max(max_gain, next.at(i) - w.at(i));
    min_low = std::min(min_low, next.at(i) - dr);
  }
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Value dr = cs.distance_from_point(i, r);
    const bool left = w.at(i) - dr == min_lhs;
    const bool right = next.at(i) - w.at(i) == max_gain && next.at(i) - dr == min_low;
    if (left != right) return false;
  }
  return true;
}

bool resolves_from(const WorkFunction& w, const Configuration& x_config, PointId x, PointId y) {
  require(x_config.contains(x), "point " + std::to_string(x) + " not in " + to_string(x_config));
  return w(x_config) == w(x_config.replaced(x, y)) + w.metric().distance(x, y);
}

}  // namespace kserver

#include <algorithm>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "kserver/error.hpp"
#include "kserver/potential.hpp"

namespace kserver {

namespace {

constexpr Value kInf = std::numeric_limits<Value>::max() / 4;

struct TableHash {
  std::size_t operator()(const std::vector<Value>& v) const {
    std::size_t h = 0xcbf29ce484222325ull;
    for (Value x : v) h = (h ^ static_cast<std::size_t>(x)) * 0x100000001b3ull;
    return h;
  }
};

// Differences of update results are shift invariant, so memo keys drop the
// first entry's offset.
std::vector<Value> shifted(const WorkFunction& w) {
  std::vector<Value> key(w.values().begin(), w.values().end());
  const Value base = key.front();
  for (Value& v : key) v -= base;
  return key;
}

bool is_cone_at(const WorkFunction& w, const Configuration& x) {
  const Value base = w(x);
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w.at(i) != base + matching_distance(x, w.configs().at(i), w.metric())) return false;
  return true;
}

}  // namespace

Value LazySequence::total_extended_cost() const {
  return std::accumulate(extended_costs.begin(), extended_costs.end(), Value{0});
}

Value default_lazy_step_bound(const WorkFunction& w) {
  return 10 * static_cast<Value>(w.k()) * w.metric().size() * std::max<Value>(w.metric().diameter(), 1);
}

LazySequence lazy_sequence(const WorkFunction& w, std::span<const PointId> tuple, std::optional<Value> step_bound) {
  require(static_cast<int>(tuple.size()) == w.k(), "tuple length must equal k");
  const Value bound = step_bound.value_or(default_lazy_step_bound(w));
  LazySequence seq{{}, {}, w};
  for (;;) {
    bool moved = false;
    for (int i = w.k() - 1; i >= 0 && !moved; --i) {
      const PointId x = tuple[static_cast<std::size_t>(i)];
      WorkFunction next = update(seq.final, x);
      if (next == seq.final) continue;
      if (static_cast<Value>(seq.requests.size()) >= bound)
        fail(ErrorKind::budget, "lazy sequence exceeded " + std::to_string(bound) + " steps");
      seq.requests.push_back(x);
      seq.extended_costs.push_back(extended_cost(seq.final, next));
      seq.final = std::move(next);
      moved = true;
    }
    if (!moved) break;
  }
  if (!is_cone_at(seq.final, Configuration(tuple)))
    fail(ErrorKind::invariant, "lazy sequence did not end in a cone at " + to_string(Configuration(tuple)));
  return seq;
}

bool verify_perm_intuition(const WorkFunction& w, std::span<const PointId> tuple) {
  const MetricSpace& space = w.metric();
  const Value k = w.k();
  const Configuration x(tuple);
  const LazySequence seq = lazy_sequence(w, tuple);
  const Value rhs = k * (k + 1) / 2 * space.diameter() - pairwise_sum(x, space) + (k + 1) * w(x) -
                    seq.total_extended_cost();
  return server_potential_at(w, tuple) == rhs;
}

Value max_extended_cost_within(const WorkFunction& w, std::span<const PointId> points, std::size_t state_budget) {
  std::unordered_map<std::vector<Value>, Value, TableHash> memo;
  // Every effective request raises the table pointwise, so the reachable
  // tables form a finite DAG and the recursion terminates.
  auto best = [&](auto&& self, const WorkFunction& cur) -> Value {
    auto key = shifted(cur);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    if (memo.size() >= state_budget)
      fail(ErrorKind::budget, "extended-cost search exceeded " + std::to_string(state_budget) + " states");
    Value out = 0;
    for (PointId x : points) {
      WorkFunction next = update(cur, x);
      if (next == cur) continue;
      out = std::max(out, extended_cost(cur, next) + self(self, next));
    }
    memo.emplace(std::move(key), out);
    return out;
  };
  return best(best, w);
}

PotentialReport lazy_potential_k3(const WorkFunction& w, LazyMode mode, std::size_t state_budget) {
  if (w.k() != 3) fail(ErrorKind::invalid_input, "lazy_potential_k3 needs k = 3");
  const MetricSpace& space = w.metric();
  const auto original = space.original_points();
  PotentialReport report;
  report.formulation = Formulation::lazy_k3;
  report.value = kInf;
  const Value base = 6 * space.diameter();
  for (std::size_t a = 0; a < original.size(); ++a)
    for (std::size_t b = a + 1; b < original.size(); ++b)
      for (std::size_t c = b + 1; c < original.size(); ++c) {
        std::array<PointId, 3> set{original[a], original[b], original[c]};
        const Configuration x(set);
        Value ext = 0;
        if (mode == LazyMode::exhaustive) {
          ext = max_extended_cost_within(w, set, state_budget);
        } else {
          std::array<PointId, 3> order = set;
          do {
            ext = std::max(ext, lazy_sequence(w, order).total_extended_cost());
          } while (std::next_permutation(order.begin(), order.end()));
        }
        const Value cl = pairwise_sum(x, space);
        const Value v = base + 4 * w(x) - cl - ext;
        if (v < report.value) {
          report.value = v;
          report.achiever.assign(set.begin(), set.end());
          report.terms = {base, 4 * w(x), cl, ext};
        }
      }
  return report;
}

}  // namespace kserver

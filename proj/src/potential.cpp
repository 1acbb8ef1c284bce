#include "kserver/potential.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "kserver/error.hpp"

namespace kserver {

namespace {

constexpr Value kInf = std::numeric_limits<Value>::max() / 4;

void require_antipodes(const WorkFunction& w) {
  if (!w.metric().has_antipodes())
    fail(ErrorKind::invalid_input, "the server potential needs antipodes; use antipodal_extension first");
}

std::vector<PointId> scope_points(const MetricSpace& space, TupleScope scope) {
  if (scope == TupleScope::original) return {space.original_points().begin(), space.original_points().end()};
  std::vector<PointId> all(static_cast<std::size_t>(space.size()));
  std::iota(all.begin(), all.end(), 0);
  return all;
}

// Calls f on every tuple over `points` in lexicographic order of positions.
template <class F>
void for_each_tuple(std::span<const PointId> points, int k, std::optional<PointId> last, F&& f) {
  std::vector<std::size_t> digit(static_cast<std::size_t>(k), 0);
  std::vector<PointId> tuple(static_cast<std::size_t>(k));
  const int free = last ? k - 1 : k;
  if (last) tuple.back() = *last;
  for (;;) {
    for (int i = 0; i < free; ++i) tuple[static_cast<std::size_t>(i)] = points[digit[static_cast<std::size_t>(i)]];
    f(std::span<const PointId>(tuple));
    int i = free - 1;
    while (i >= 0 && ++digit[static_cast<std::size_t>(i)] == points.size()) digit[static_cast<std::size_t>(i--)] = 0;
    if (i < 0) break;
  }
}

PotentialReport scan(const WorkFunction& w, TupleScope scope, std::optional<PointId> last) {
  require_antipodes(w);
  const auto points = scope_points(w.metric(), scope);
  PotentialReport report;
  report.formulation = Formulation::server;
  report.value = kInf;
  for_each_tuple(points, w.k(), last, [&](std::span<const PointId> tuple) {
    Value v = server_potential_at(w, tuple);
    if (v < report.value) {
      report.value = v;
      report.all_achievers.clear();
    }
    if (v == report.value) report.all_achievers.emplace_back(tuple.begin(), tuple.end());
  });
  std::sort(report.all_achievers.begin(), report.all_achievers.end());
  report.achiever = report.all_achievers.front();
  report.terms = server_potential_terms(w, report.achiever);
  return report;
}

}  // namespace

std::string_view to_string(Formulation f) {
  switch (f) {
    case Formulation::server: return "server";
    case Formulation::evader: return "evader";
    case Formulation::lazy_k3: return "lazy_k3";
    case Formulation::mst: return "mst";
  }
  return "server";
}

Configuration potential_term_config(const MetricSpace& space, std::span<const PointId> tuple, int i) {
  const int k = static_cast<int>(tuple.size());
  require(i >= 0 && i <= k, "term index out of range");
  std::array<PointId, kMaxServers> pts{};
  for (int j = 0; j < i; ++j) pts[static_cast<std::size_t>(j)] = space.antipode(tuple[static_cast<std::size_t>(i - 1)]);
  for (int j = i; j < k; ++j) pts[static_cast<std::size_t>(j)] = tuple[static_cast<std::size_t>(j)];
  return Configuration(std::span<const PointId>(pts.data(), static_cast<std::size_t>(k)));
}

std::vector<Value> server_potential_terms(const WorkFunction& w, std::span<const PointId> tuple) {
  require_antipodes(w);
  require(static_cast<int>(tuple.size()) == w.k(), "tuple length must equal k");
  std::vector<Value> terms;
  for (int i = 0; i <= w.k(); ++i) terms.push_back(w(potential_term_config(w.metric(), tuple, i)));
  return terms;
}

Value server_potential_at(const WorkFunction& w, std::span<const PointId> tuple) {
  auto terms = server_potential_terms(w, tuple);
  return std::accumulate(terms.begin(), terms.end(), Value{0});
}

PotentialReport server_potential(const WorkFunction& w, TupleScope scope) { return scan(w, scope, std::nullopt); }

PotentialReport server_potential_with_last(const WorkFunction& w, PointId last, TupleScope scope) {
  return scan(w, scope, last);
}

Value server_potential_value(const WorkFunction& w, std::span<const PointId> candidates, std::optional<PointId> last) {
  require_antipodes(w);
  const MetricSpace& space = w.metric();
  const ConfigSpace& cs = w.configs();
  const int k = w.k();
  const std::size_t m = candidates.size();
  require(m > 0, "no candidate points");
  // g[j] is indexed by (x_{j+1}, ..., x_k) in base m; eliminating x_1 first.
  // Phi = min over x_k..x_1 of sum_i w(anti(x_i)^i x_{i+1..k}), and term i
  // only involves x_i..x_k.
  std::vector<Value> prev;
  std::vector<std::size_t> pow(static_cast<std::size_t>(k + 1), 1);
  for (int i = 1; i <= k; ++i) pow[static_cast<std::size_t>(i)] = pow[static_cast<std::size_t>(i - 1)] * m;
  std::array<PointId, kMaxServers> pts{};
  auto term = [&](int i, const std::vector<PointId>& suffix_from_i) {
    // suffix_from_i holds x_i..x_k (x_0 unused for i = 0).
    for (int j = 0; j < k; ++j) {
      const int src = j < i ? 0 : j - i + 1;
      pts[static_cast<std::size_t>(j)] =
          j < i ? space.antipode(suffix_from_i[0]) : suffix_from_i[static_cast<std::size_t>(src)];
    }
    std::sort(pts.begin(), pts.begin() + k);
    return w.at(cs.rank_sorted(pts.data()));
  };
  std::vector<PointId> suffix(static_cast<std::size_t>(k) + 1);
  for (int i = 1; i <= k; ++i) {
    // Table over x_{i+1}..x_k: k - i free coordinates.
    const std::size_t size = pow[static_cast<std::size_t>(k - i)];
    std::vector<Value> cur(size, kInf);
    for (std::size_t code = 0; code < size; ++code) {
      // Decode x_{i+1}..x_k.
      std::size_t c = code;
      bool fixed_ok = true;
      for (int j = i + 1; j <= k; ++j) {
        suffix[static_cast<std::size_t>(j - i)] = candidates[c % m];
        c /= m;
      }
      if (last && i < k && suffix[static_cast<std::size_t>(k - i)] != *last) fixed_ok = false;
      if (!fixed_ok) continue;
      Value best = kInf;
      for (std::size_t xi = 0; xi < m; ++xi) {
        if (last && i == k && candidates[xi] != *last) continue;
        suffix[0] = candidates[xi];
        Value v = term(i, suffix);
        if (i == 1) {
          // Term 0 is w(x_1..x_k).
          for (int j = 0; j < k; ++j) pts[static_cast<std::size_t>(j)] = suffix[static_cast<std::size_t>(j)];
          std::sort(pts.begin(), pts.begin() + k);
          v += w.at(cs.rank_sorted(pts.data()));
        } else {
          v += prev[xi + m * code];
        }
        best = std::min(best, v);
      }
      cur[code] = best;
    }
    prev = std::move(cur);
  }
  return prev[0];
}

bool check_last_request_attains(const WorkFunction& w, PointId r, TupleScope scope) {
  const auto points = scope_points(w.metric(), scope);
  return server_potential_value(w, points, r) == server_potential_value(w, points);
}

Verdict<PushWitness> check_push(const WorkFunction& w, TupleScope scope) {
  require_antipodes(w);
  if (!w.last_request()) fail(ErrorKind::invalid_input, "push check needs a last request");
  const PointId r = *w.last_request();
  const int k = w.k();
  auto points = scope_points(w.metric(), scope);
  points.erase(std::remove(points.begin(), points.end(), r), points.end());
  if (static_cast<int>(points.size()) < k - 1) return {};
  // Choose the k - 1 companions of r.
  std::vector<bool> pick(points.size(), false);
  std::fill(pick.begin(), pick.begin() + (k - 1), true);
  do {
    std::vector<PointId> set{r};
    for (std::size_t i = 0; i < points.size(); ++i)
      if (pick[i]) set.push_back(points[i]);
    std::sort(set.begin(), set.end());
    Value best_any = kInf, best_last = kInf;
    std::vector<PointId> order = set;
    do {
      Value v = server_potential_at(w, order);
      best_any = std::min(best_any, v);
      if (order.back() == r) best_last = std::min(best_last, v);
    } while (std::next_permutation(order.begin(), order.end()));
    if (best_any != best_last) return {false, PushWitness{set, best_any, best_last}};
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return {};
}

Value laziness_gap(const WorkFunction& w, PointId r) {
  const WorkFunction next = update(w, r);
  const auto points = scope_points(w.metric(), TupleScope::original);
  return server_potential_value(next, points) - server_potential_value(w, points) - extended_cost(w, next);
}

}  // namespace kserver

#include <algorithm>
#include <array>
#include <bit>
#include <limits>
#include <vector>

#include "kserver/error.hpp"
#include "kserver/potential.hpp"

namespace kserver {

namespace {

constexpr Value kInf = std::numeric_limits<Value>::max() / 4;
constexpr int kMaxEvaderPoints = 20;

using Mask = std::uint32_t;

// w_hat(C) = w(M \ C) on evader sets C of size m = n - k.
struct EvaderTables {
  int n = 0;
  int m = 0;  // evaders
  int k = 0;

  explicit EvaderTables(const WorkFunction& w) : n(w.metric().size()), m(n - w.k()), k(w.k()) {
    if (n > kMaxEvaderPoints)
      fail(ErrorKind::unsupported, "evader potential supports at most " + std::to_string(kMaxEvaderPoints) + " points");
    require(m >= 1, "evader view needs k < n");
  }

  // min over C inside S with |C| = m of w_hat(C) + d(C, y^m). The server set
  // X = M \ C contains M \ S, so only its remaining points are enumerated.
  Value transport(const WorkFunction& w, Mask s, PointId y) const {
    const MetricSpace& space = w.metric();
    std::vector<PointId> fixed, free;
    Value base = 0;
    for (PointId p = 0; p < n; ++p) {
      if (s >> p & 1u) {
        free.push_back(p);
        base += space.distance(p, y);
      } else {
        fixed.push_back(p);
      }
    }
    const int need = k - static_cast<int>(fixed.size());
    if (need < 0 || need > static_cast<int>(free.size())) return kInf;
    std::vector<int> pick(static_cast<std::size_t>(need));
    for (int i = 0; i < need; ++i) pick[static_cast<std::size_t>(i)] = i;
    Value best = kInf;
    std::array<PointId, kMaxServers> pts{};
    while (true) {
      Value v = base;
      std::size_t j = 0;
      for (PointId p : fixed) pts[j++] = p;
      for (int i : pick) {
        const PointId p = free[static_cast<std::size_t>(i)];
        pts[j++] = p;
        v -= space.distance(p, y);
      }
      std::sort(pts.begin(), pts.begin() + k);
      best = std::min(best, v + w.at(w.configs().rank_sorted(pts.data())));
      int i = need - 1;
      while (i >= 0 && pick[static_cast<std::size_t>(i)] == static_cast<int>(free.size()) - need + i) --i;
      if (i < 0) break;
      ++pick[static_cast<std::size_t>(i)];
      for (int q = i + 1; q < need; ++q) pick[static_cast<std::size_t>(q)] = pick[static_cast<std::size_t>(q - 1)] + 1;
    }
    return best;
  }
};

Value closeness(const MetricSpace& space, Mask s) {
  std::vector<PointId> pts;
  for (int p = 0; p < space.size(); ++p)
    if (s >> p & 1u) pts.push_back(p);
  return pairwise_sum(pts, space);
}

}  // namespace

PotentialReport evader_potential(const WorkFunction& w, std::optional<std::span<const PointId>> permutation);

namespace {

// g[S] = best value of an ordering whose first |S| points are S, for
// |S| >= m - 1; the last point placed may be fixed.
PotentialReport evader_minimum(const WorkFunction& w, std::optional<PointId> last) {
  const EvaderTables t(w);
  const MetricSpace& space = w.metric();
  const int n = t.n, m = t.m;
  const Mask full = (Mask{1} << n) - 1;
  std::vector<Value> g(std::size_t{1} << n, kInf);
  std::vector<PointId> choice(std::size_t{1} << n, -1);
  for (Mask s = 0; s <= full; ++s) {
    const int size = std::popcount(s);
    if (size == m - 1) {
      g[s] = closeness(space, s);
    } else if (size >= m) {
      for (PointId y = 0; y < n; ++y) {
        if (!(s >> y & 1u) || g[s & ~(Mask{1} << y)] >= kInf) continue;
        if (last && s == full && y != *last) continue;
        Value v = g[s & ~(Mask{1} << y)] + t.transport(w, s, y);
        if (v < g[s]) g[s] = v, choice[s] = y;
      }
    }
  }
  std::vector<PointId> tail;
  for (Mask s = full; std::popcount(s) >= m; s &= ~(Mask{1} << choice[s])) tail.push_back(choice[s]);
  std::vector<PointId> perm;
  for (PointId p = 0; p < n; ++p)
    if (std::find(tail.begin(), tail.end(), p) == tail.end()) perm.push_back(p);
  perm.insert(perm.end(), tail.rbegin(), tail.rend());
  PotentialReport report = evader_potential(w, std::span<const PointId>(perm));
  if (report.value != g[full]) fail(ErrorKind::invariant, "evader dynamic program disagrees with its achiever");
  return report;
}

}  // namespace

PotentialReport evader_potential(const WorkFunction& w, std::optional<std::span<const PointId>> permutation) {
  const EvaderTables t(w);
  const MetricSpace& space = w.metric();
  const int n = t.n, m = t.m;
  PotentialReport report;
  report.formulation = Formulation::evader;
  if (permutation) {
    require(static_cast<int>(permutation->size()) == n, "permutation must list every point");
    Mask prefix = 0;
    for (int i = 0; i < n; ++i) {
      const PointId y = (*permutation)[static_cast<std::size_t>(i)];
      require(y >= 0 && y < n && !(prefix >> y & 1u), "not a permutation");
      prefix |= Mask{1} << y;
      if (i + 1 == m - 1) report.terms.push_back(closeness(space, prefix));
      if (i + 1 >= m) report.terms.push_back(t.transport(w, prefix, y));
    }
    if (m == 1) report.terms.insert(report.terms.begin(), 0);
    report.achiever.assign(permutation->begin(), permutation->end());
    for (Value v : report.terms) report.value += v;
    return report;
  }
  return evader_minimum(w, std::nullopt);
}

PotentialReport evader_potential_with_last(const WorkFunction& w, PointId last) {
  require(last >= 0 && last < w.metric().size(), "point out of range");
  return evader_minimum(w, last);
}

Value evader_server_shift(const MetricSpace& space, int k) {
  std::vector<PointId> all(static_cast<std::size_t>(space.size()));
  for (int i = 0; i < space.size(); ++i) all[static_cast<std::size_t>(i)] = i;
  return pairwise_sum(all, space) - static_cast<Value>(k) * (k + 1) / 2 * space.diameter();
}

namespace {

struct Mst {
  Value weight = 0;
  std::vector<std::pair<PointId, PointId>> edges;
};

// Prim on the complete graph over `nodes`.
Mst prim(const std::vector<PointId>& nodes, const std::vector<std::vector<Value>>& weight) {
  Mst out;
  if (nodes.empty()) return out;
  std::vector<bool> in(nodes.size(), false);
  std::vector<Value> best(nodes.size(), kInf);
  std::vector<std::size_t> from(nodes.size(), 0);
  best[0] = 0;
  for (std::size_t round = 0; round < nodes.size(); ++round) {
    std::size_t u = nodes.size();
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (!in[i] && (u == nodes.size() || best[i] < best[u])) u = i;
    in[u] = true;
    if (round > 0) {
      out.weight += best[u];
      out.edges.emplace_back(nodes[from[u]], nodes[u]);
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      Value wgt = weight[static_cast<std::size_t>(nodes[u])][static_cast<std::size_t>(nodes[i])];
      if (!in[i] && wgt < best[i]) best[i] = wgt, from[i] = u;
    }
  }
  return out;
}

}  // namespace

MstReport mst_evader_potential(const WorkFunction& w) {
  const MetricSpace& space = w.metric();
  const int n = space.size();
  if (w.k() != n - 2) fail(ErrorKind::invalid_input, "the spanning-tree potential needs k = n - 2");
  std::vector<std::vector<Value>> weight(static_cast<std::size_t>(n), std::vector<Value>(static_cast<std::size_t>(n), kInf));
  for (PointId x = 0; x < n; ++x)
    for (PointId y = x + 1; y < n; ++y) {
      std::vector<PointId> rest;
      for (PointId p = 0; p < n; ++p)
        if (p != x && p != y) rest.push_back(p);
      Value v = w(Configuration(std::span<const PointId>(rest))) + space.distance(x, y);
      weight[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] = v;
      weight[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)] = v;
    }
  std::vector<PointId> all(static_cast<std::size_t>(n));
  for (PointId p = 0; p < n; ++p) all[static_cast<std::size_t>(p)] = p;
  Mst tree = prim(all, weight);
  MstReport report;
  report.value = tree.weight;
  report.edges = tree.edges;
  report.last_request = w.last_request();
  if (report.last_request) {
    const PointId r = *report.last_request;
    // r is a leaf of some minimum tree iff attaching it by its cheapest edge
    // to a minimum tree of the rest costs no more.
    std::vector<PointId> rest;
    Value cheapest = kInf;
    for (PointId p = 0; p < n; ++p)
      if (p != r) {
        rest.push_back(p);
        cheapest = std::min(cheapest, weight[static_cast<std::size_t>(r)][static_cast<std::size_t>(p)]);
      }
    report.last_request_is_leaf = prim(rest, weight).weight + cheapest == tree.weight;
  }
  return report;
}

}  // namespace kserver

#include "kserver/tree_metric.hpp"

#include <algorithm>
#include <limits>

#include "kserver/error.hpp"

namespace kserver {

QuasiconcavityCheck is_quasiconcave(const MetricSpace& space) {
  const int n = space.size();
  auto d = [&](int a, int b) { return space.distance(a, b); };
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c)
        for (int e = c + 1; e < n; ++e) {
          std::array<Value, 3> sums{d(a, b) + d(c, e), d(a, c) + d(b, e), d(a, e) + d(b, c)};
          std::array<Value, 3> sorted = sums;
          std::sort(sorted.begin(), sorted.end());
          if (sorted[1] != sorted[2]) return {false, QuadrupleWitness{{a, b, c, e}, sums}};
        }
  return {};
}

namespace {

struct Builder {
  WeightedTree tree;
  std::vector<std::vector<std::pair<int, std::size_t>>> adj;  // (neighbor, edge index)

  int add_node(std::optional<PointId> p) {
    tree.nodes.push_back(p);
    adj.emplace_back();
    return static_cast<int>(tree.nodes.size() - 1);
  }
  void add_edge(int u, int v, Value w) {
    tree.edges.push_back({u, v, w});
    adj[static_cast<std::size_t>(u)].push_back({v, tree.edges.size() - 1});
    adj[static_cast<std::size_t>(v)].push_back({u, tree.edges.size() - 1});
  }
  void remove_edge(std::size_t e) {
    auto& E = tree.edges[e];
    for (int end : {E.u, E.v}) {
      auto& list = adj[static_cast<std::size_t>(end)];
      list.erase(std::remove_if(list.begin(), list.end(), [&](auto& x) { return x.second == e; }), list.end());
    }
    E.weight = -1;  // tombstone, compacted at the end
  }
  // Node sequence and edge sequence from u to v.
  std::pair<std::vector<int>, std::vector<std::size_t>> path(int u, int v) const {
    std::vector<int> prev(tree.nodes.size(), -1);
    std::vector<std::size_t> via(tree.nodes.size());
    std::vector<int> stack{u};
    prev[static_cast<std::size_t>(u)] = u;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (auto [y, e] : adj[static_cast<std::size_t>(x)]) {
        if (prev[static_cast<std::size_t>(y)] >= 0) continue;
        prev[static_cast<std::size_t>(y)] = x;
        via[static_cast<std::size_t>(y)] = e;
        stack.push_back(y);
      }
    }
    std::vector<int> nodes{v};
    std::vector<std::size_t> edges;
    while (nodes.back() != u) {
      edges.push_back(via[static_cast<std::size_t>(nodes.back())]);
      nodes.push_back(prev[static_cast<std::size_t>(nodes.back())]);
    }
    std::reverse(nodes.begin(), nodes.end());
    std::reverse(edges.begin(), edges.end());
    return {nodes, edges};
  }
};

}  // namespace

int WeightedTree::node_of(PointId p) const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i] == p) return static_cast<int>(i);
  fail(ErrorKind::invalid_input, "point " + std::to_string(p) + " is not in the tree");
}

Value WeightedTree::path_weight(PointId a, PointId b) const {
  const int src = node_of(a), dst = node_of(b);
  std::vector<Value> dist(nodes.size(), -1);
  std::vector<int> stack{src};
  dist[static_cast<std::size_t>(src)] = 0;
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    for (const auto& e : edges) {
      int y = e.u == x ? e.v : e.v == x ? e.u : -1;
      if (y < 0 || dist[static_cast<std::size_t>(y)] >= 0) continue;
      dist[static_cast<std::size_t>(y)] = dist[static_cast<std::size_t>(x)] + e.weight;
      stack.push_back(y);
    }
  }
  return dist[static_cast<std::size_t>(dst)];
}

WeightedTree tree_from_quasiconcave(const MetricSpace& space) {
  if (auto check = is_quasiconcave(space); !check) {
    const auto& w = *check.witness;
    fail(ErrorKind::invalid_input, "metric is not quasiconcave: points " + space.label(w.points[0]) + "," +
                                       space.label(w.points[1]) + "," + space.label(w.points[2]) + "," +
                                       space.label(w.points[3]) + " have pair sums " +
                                       format_scaled(w.pair_sums[0], space.scale()) + "," +
                                       format_scaled(w.pair_sums[1], space.scale()) + "," +
                                       format_scaled(w.pair_sums[2], space.scale()));
  }
  const int n = space.size();
  // Doubled units keep the half-sums integral.
  auto D = [&](PointId a, PointId b) { return 2 * space.distance(a, b); };
  Builder B;
  B.tree.weight_scale = 2 * space.scale();
  std::vector<int> node(static_cast<std::size_t>(n), -1);
  node[0] = B.add_node(0);
  if (n >= 2) {
    node[1] = B.add_node(1);
    B.add_edge(node[0], node[1], D(0, 1));
  }
  for (PointId z = 2; z < n; ++z) {
    PointId bx = 0, by = 1;
    Value best = std::numeric_limits<Value>::max();
    for (PointId x = 0; x < z; ++x)
      for (PointId y = x + 1; y < z; ++y) {
        Value v = D(x, z) + D(y, z) - D(x, y);
        if (v < best) best = v, bx = x, by = y;
      }
    const Value along = (D(bx, z) + D(bx, by) - D(by, z)) / 2;
    const Value pendant = best / 2;
    auto [pnodes, pedges] = B.path(node[static_cast<std::size_t>(bx)], node[static_cast<std::size_t>(by)]);
    int attach = -1;
    Value cum = 0;
    for (std::size_t i = 0; i < pnodes.size(); ++i) {
      if (cum == along) {
        attach = pnodes[i];
        break;
      }
      if (i == pedges.size()) break;
      const auto e = pedges[i];
      const Value w = B.tree.edges[e].weight;
      if (cum < along && along < cum + w) {
        const int u = pnodes[i], v = pnodes[i + 1];
        B.remove_edge(e);
        attach = pendant == 0 ? B.add_node(z) : B.add_node(std::nullopt);
        B.add_edge(u, attach, along - cum);
        B.add_edge(attach, v, cum + w - along);
        break;
      }
      cum += w;
    }
    if (attach < 0) fail(ErrorKind::invariant, "attachment point not found on the tree path");
    if (pendant == 0 && B.tree.nodes[static_cast<std::size_t>(attach)] == z) {
      node[static_cast<std::size_t>(z)] = attach;
    } else if (pendant == 0 && !B.tree.nodes[static_cast<std::size_t>(attach)]) {
      B.tree.nodes[static_cast<std::size_t>(attach)] = z;
      node[static_cast<std::size_t>(z)] = attach;
    } else {
      node[static_cast<std::size_t>(z)] = B.add_node(z);
      B.add_edge(attach, node[static_cast<std::size_t>(z)], pendant);
    }
  }
  WeightedTree out;
  out.nodes = B.tree.nodes;
  out.weight_scale = B.tree.weight_scale;
  for (const auto& e : B.tree.edges)
    if (e.weight >= 0) out.edges.push_back(e);
  for (PointId a = 0; a < n; ++a)
    for (PointId b = a + 1; b < n; ++b)
      if (out.path_weight(a, b) != D(a, b))
        fail(ErrorKind::invariant, "reconstructed tree disagrees at " + space.label(a) + "," + space.label(b));
  return out;
}

}  // namespace kserver

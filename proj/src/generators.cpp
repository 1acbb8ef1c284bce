#include "kserver/generators.hpp"

#include <algorithm>

#include "kserver/error.hpp"

namespace kserver {

PointId random_point(const MetricSpace& space, Rng& rng, std::span<const PointId> points) {
  if (points.empty()) return std::uniform_int_distribution<PointId>(0, space.size() - 1)(rng);
  return points[std::uniform_int_distribution<std::size_t>(0, points.size() - 1)(rng)];
}

Configuration random_configuration(const ConfigSpace& configs, Rng& rng, std::span<const PointId> points) {
  std::vector<PointId> pts;
  for (int i = 0; i < configs.k(); ++i) pts.push_back(random_point(configs.metric(), rng, points));
  return Configuration(std::span<const PointId>(pts));
}

WorkFunction random_reachable(const ConfigSpacePtr& configs, Rng& rng, int max_requests,
                              std::span<const PointId> points) {
  require(max_requests >= 1, "need at least one request");
  WorkFunction w = WorkFunction::cone(configs, random_configuration(*configs, rng, points));
  const int count = std::uniform_int_distribution<int>(1, max_requests)(rng);
  for (int i = 0; i < count; ++i) w = update(w, random_point(configs->metric(), rng, points));
  return w;
}

RequestSeq random_events(const MetricSpace& circle, Rng& rng, int count, int dest_step) {
  require(circle.size() % dest_step == 0, "destination step must divide the number of points");
  std::uniform_int_distribution<PointId> any(0, circle.size() - 1);
  std::uniform_int_distribution<PointId> dest(0, circle.size() / dest_step - 1);
  RequestSeq out;
  for (int i = 0; i < count; ++i) {
    const PointId t = dest(rng) * dest_step;
    if (std::bernoulli_distribution(0.5)(rng))
      out.push_back(ServerRequest{t});
    else
      out.push_back(TaxiRequest{any(rng), t});
  }
  return out;
}

WorkFunction random_reachable_taxi(const ConfigSpacePtr& configs, Rng& rng, int max_events, int dest_step) {
  std::vector<PointId> grid;
  for (PointId p = 0; p < configs->num_points(); p += dest_step) grid.push_back(p);
  const WorkFunction cone = WorkFunction::cone(configs, random_configuration(*configs, rng, grid));
  const int count = std::uniform_int_distribution<int>(1, max_events)(rng);
  return apply_events(cone, random_events(configs->metric(), rng, count, dest_step));
}

SpacePtr random_tree_space(int nodes, Value max_weight, Rng& rng) {
  require(nodes >= 1, "a tree needs a node");
  std::uniform_int_distribution<Value> weight(1, max_weight);
  std::vector<WeightedEdge> edges;
  for (PointId v = 1; v < nodes; ++v)
    edges.push_back({std::uniform_int_distribution<PointId>(0, v - 1)(rng), v, weight(rng)});
  return build_tree(nodes, edges, 1);
}

SpacePtr random_leaf_metric(int leaves, Value max_weight, Rng& rng) {
  require(leaves >= 2, "need at least two leaves");
  std::uniform_int_distribution<Value> weight(1, max_weight);
  // Nodes 0..leaves-1 are leaves; internal nodes follow.
  std::vector<WeightedEdge> edges{{0, 1, weight(rng)}};
  int next_internal = leaves;
  for (PointId leaf = 2; leaf < leaves; ++leaf) {
    const std::size_t e = std::uniform_int_distribution<std::size_t>(0, edges.size() - 1)(rng);
    const PointId mid = next_internal++;
    const WeightedEdge old = edges[e];
    edges[e] = {old.u, mid, weight(rng)};
    edges.push_back({mid, old.v, weight(rng)});
    edges.push_back({mid, leaf, weight(rng)});
  }
  std::vector<std::string> labels;
  for (int v = 0; v < next_internal; ++v) labels.push_back((v < leaves ? "l" : "i") + std::to_string(v));
  const SpacePtr tree = build_tree(next_internal, edges, 1, labels);
  std::vector<PointId> keep;
  for (PointId v = 0; v < leaves; ++v) keep.push_back(v);
  return restrict_to(tree, keep);
}

SpacePtr random_general_metric(int n, Value max_weight, Rng& rng) {
  require(n >= 1, "a metric needs a point");
  std::uniform_int_distribution<Value> weight(1, max_weight);
  const auto un = static_cast<std::size_t>(n);
  std::vector<Value> d(un * un, 0);
  for (std::size_t i = 0; i < un; ++i)
    for (std::size_t j = i + 1; j < un; ++j) d[i * un + j] = d[j * un + i] = weight(rng);
  for (std::size_t m = 0; m < un; ++m)
    for (std::size_t i = 0; i < un; ++i)
      for (std::size_t j = 0; j < un; ++j) d[i * un + j] = std::min(d[i * un + j], d[i * un + m] + d[m * un + j]);
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));
  return build_general(labels, d, 1);
}

}  // namespace kserver

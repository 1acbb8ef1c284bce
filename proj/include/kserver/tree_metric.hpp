#pragma once

#include <array>
#include <optional>
#include <vector>

#include "kserver/metric.hpp"

namespace kserver {

/// Four points whose three pair-sums have a unique maximum.
struct QuadrupleWitness {
  std::array<PointId, 4> points;
  std::array<Value, 3> pair_sums;  // d(a,b)+d(c,d), d(a,c)+d(b,d), d(a,d)+d(b,c)
};

struct QuasiconcavityCheck {
  bool holds = true;
  std::optional<QuadrupleWitness> witness;
  explicit operator bool() const { return holds; }
};

/// For every four points the largest of the three pair-sums is attained at
/// least twice. Spaces with fewer than four points pass vacuously.
QuasiconcavityCheck is_quasiconcave(const MetricSpace& space);

/// Tree with nonnegative edge weights whose labelled nodes are the metric's points.
///
/// Attachment points of the reconstruction sit at half-sums of distances, so
/// weights are stored in units of 1/(2*scale) of the source metric.
struct WeightedTree {
  struct Edge {
    int u;
    int v;
    Value weight;
  };
  std::vector<std::optional<PointId>> nodes;  // metric point, or nullopt for internal nodes
  std::vector<Edge> edges;
  Value weight_scale = 2;  // weights are in 1/weight_scale units

  int node_of(PointId p) const;
  /// Distance between the nodes of two metric points, in 1/weight_scale units.
  Value path_weight(PointId a, PointId b) const;
};

/// Rebuilds a tree whose leaf-distance equals the metric exactly. Points are
/// inserted one at a time, each attached on the path between the two placed
/// points x, y minimising d(x,z) + d(y,z) - d(x,y).
WeightedTree tree_from_quasiconcave(const MetricSpace& space);

}  // namespace kserver

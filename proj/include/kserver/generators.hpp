#pragma once

#include <random>
#include <span>

#include "kserver/taxi.hpp"
#include "kserver/work_function.hpp"

namespace kserver {

using Rng = std::mt19937_64;

/// Uniform point of `points` (all points when empty).
PointId random_point(const MetricSpace& space, Rng& rng, std::span<const PointId> points = {});
Configuration random_configuration(const ConfigSpace& configs, Rng& rng, std::span<const PointId> points = {});

/// Cone at a random configuration followed by 1..max_requests random
/// requests, all drawn from `points` (all points when empty).
WorkFunction random_reachable(const ConfigSpacePtr& configs, Rng& rng, int max_requests,
                              std::span<const PointId> points = {});

/// Mixed server and taxi events on a circle; destinations every `dest_step`
/// points, starts anywhere.
RequestSeq random_events(const MetricSpace& circle, Rng& rng, int count, int dest_step = 1);
/// Cone at a random configuration of destination points, then random events
/// applied with taxi_update.
WorkFunction random_reachable_taxi(const ConfigSpacePtr& configs, Rng& rng, int max_events, int dest_step = 1);

/// Random tree on `nodes` vertices with integer weights in [1, max_weight].
SpacePtr random_tree_space(int nodes, Value max_weight, Rng& rng);
/// Leaf-distance of a random tree with `leaves` leaves and random internal
/// nodes of degree 3, weights in [1, max_weight].
SpacePtr random_leaf_metric(int leaves, Value max_weight, Rng& rng);
/// Shortest-path metric of a complete graph with weights in [1, max_weight].
SpacePtr random_general_metric(int n, Value max_weight, Rng& rng);

}  // namespace kserver

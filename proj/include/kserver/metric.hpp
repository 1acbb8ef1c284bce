#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "kserver/configuration.hpp"

namespace kserver {

enum class SpaceKind { circle, tree, multiray, star, general, extended };

std::string_view to_string(SpaceKind kind);
SpaceKind space_kind_from_string(std::string_view name);

/// Finite metric space with exact integer distances.
///
/// Every length is stored as an integer number of 1/scale units: a reported
/// length of 6.5 on a space with scale 2 is stored as 13. Distances are
/// validated on construction (symmetry, zero diagonal, triangle inequality),
/// so a MetricSpace is immutable and always well formed.
class MetricSpace {
 public:
  struct Init {
    std::vector<std::string> labels;
    std::vector<Value> dist;  // row-major n x n
    Value scale = 1;
    SpaceKind kind = SpaceKind::general;
    // Points of the space before antipodal extension; empty means all points.
    std::vector<PointId> original;
    // Antipode map; detected from the distances when absent.
    std::optional<std::vector<PointId>> antipodes;
    std::vector<PointId> leaves;
    std::optional<PointId> center;
    // Circle metadata: scaled position of every point and the circumference.
    std::vector<Value> positions;
    Value circumference = 0;
    // Distinct points at distance zero are allowed (copies of a point).
    bool pseudo = false;
    nlohmann::json source;
  };

  explicit MetricSpace(Init init);

  int size() const { return static_cast<int>(labels_.size()); }
  Value distance(PointId a, PointId b) const {
    return dist_[static_cast<std::size_t>(a) * labels_.size() + static_cast<std::size_t>(b)];
  }
  Value scale() const { return scale_; }
  Value diameter() const { return diameter_; }
  SpaceKind kind() const { return kind_; }
  bool pseudo() const { return pseudo_; }

  bool has_antipodes() const { return antipodes_.has_value(); }
  PointId antipode(PointId p) const;

  std::span<const PointId> original_points() const { return original_; }
  bool is_original(PointId p) const { return is_original_[static_cast<std::size_t>(p)]; }
  std::span<const PointId> leaves() const { return leaves_; }
  std::optional<PointId> center() const { return center_; }

  bool is_circle() const { return kind_ == SpaceKind::circle; }
  std::span<const Value> positions() const { return positions_; }
  Value circumference() const { return circumference_; }

  const std::string& label(PointId p) const { return labels_[static_cast<std::size_t>(p)]; }
  std::optional<PointId> find(std::string_view label) const;
  // Resolves a label, or for circles a decimal position such as "6.50".
  PointId point(std::string_view text) const;

  const nlohmann::json& source() const { return source_; }

 private:
  std::vector<std::string> labels_;
  std::vector<Value> dist_;
  Value scale_;
  Value diameter_ = 0;
  SpaceKind kind_;
  bool pseudo_;
  std::optional<std::vector<PointId>> antipodes_;
  std::vector<PointId> original_;
  std::vector<bool> is_original_;
  std::vector<PointId> leaves_;
  std::optional<PointId> center_;
  std::vector<Value> positions_;
  Value circumference_;
  nlohmann::json source_;
};

using SpacePtr = std::shared_ptr<const MetricSpace>;

struct WeightedEdge {
  PointId u;
  PointId v;
  Value weight;  // scaled
};

// Constructors. Every length argument is already scaled.

/// Equally spaced points on a circle. Rejects spacings that are not whole
/// scaled units and suggests a scale that works.
SpacePtr build_circle(int num_points, Value circumference, Value scale);
/// Points of a circle at arbitrary scaled positions in [0, circumference).
SpacePtr build_circle_subset(std::vector<Value> positions, Value circumference, Value scale);
SpacePtr build_tree(int num_nodes, std::span<const WeightedEdge> edges, Value scale,
                    std::vector<std::string> labels = {});
/// Weighted star: leaves at the given distances from a center.
SpacePtr build_star(std::span<const Value> leaf_weights, Value scale, bool include_center);
/// Center plus grid points every `step` along each ray.
SpacePtr build_multiray(std::span<const Value> ray_lengths, Value step, Value scale);
/// Points 0, step, 2*step, ... on a line (a two-ray space).
SpacePtr build_line(int num_points, Value step, Value scale);
SpacePtr build_general(std::vector<std::string> labels, std::vector<Value> dist, Value scale);

/// Adds an antipodal copy of every point (copy of p at 2*diameter - d(p, q)
/// from q). Returns the input unchanged when every point already has an antipode.
SpacePtr antipodal_extension(const SpacePtr& space);
/// Pseudo-metric with `copies` zero-distance copies of every point.
SpacePtr with_copies(const SpacePtr& space, int copies);
/// Sub-metric on the given points, in the given order.
SpacePtr restrict_to(const SpacePtr& space, std::span<const PointId> points);

/// Minimum-cost perfect matching between two configurations of equal size.
Value matching_distance(const Configuration& x, const Configuration& y, const MetricSpace& space);
/// Enumerates all bijections; used for k <= 5.
Value matching_distance_enumerated(const Configuration& x, const Configuration& y,
                                   const MetricSpace& space);
/// Hungarian method; used above k = 5.
Value matching_distance_assignment(const Configuration& x, const Configuration& y,
                                   const MetricSpace& space);

/// Sum of distances over unordered pairs of the multiset.
Value pairwise_sum(std::span<const PointId> points, const MetricSpace& space);
inline Value pairwise_sum(const Configuration& c, const MetricSpace& space) {
  return pairwise_sum(c.points(), space);
}

/// Formats a scaled value in original units ("6.5", or "7/3" when no short
/// decimal exists).
std::string format_scaled(Value v, Value scale);
/// Parses "6.5", "-2", "13/2" into scaled units; throws if not exact.
Value parse_scaled(std::string_view text, Value scale);

}  // namespace kserver

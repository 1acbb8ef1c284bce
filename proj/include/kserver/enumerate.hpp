#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kserver/work_function.hpp"

namespace kserver {

/// Work-function table with its minimum subtracted, minimised over a dihedral
/// group of circle symmetries.
struct CanonicalWF {
  std::vector<Value> table;
  friend bool operator==(const CanonicalWF&, const CanonicalWF&) = default;
};

/// Symmetries p -> +/-p + j * rotation_step (mod n) of an equally spaced circle.
std::vector<std::vector<PointId>> circle_symmetries(int num_points, int rotation_step);
/// Image of w under a point permutation.
WorkFunction transform(const WorkFunction& w, std::span<const PointId> perm);
/// Invariant under the symmetry group and additive shifts.
CanonicalWF canonicalize(const WorkFunction& w, int rotation_step = 1);

struct EnumerationOptions {
  int num_points = 16;     // circle grid, circumference 8 at scale 2
  int k = 3;
  int dest_step = 2;       // destinations every dest_step grid points
  bool taxi_alphabet = true;  // false: server requests at destinations only
  bool midpoint_violation_requests = false;  // also test requests off the destination grid
  std::size_t max_states = 0;  // 0 = unlimited
  int workers = 1;
  bool seed_cones = true;
  std::vector<WorkFunction> extra_seeds;
  std::optional<std::filesystem::path> checkpoint;
  bool resume = false;
  std::size_t checkpoint_every = 50000;
  std::function<void(std::size_t states, std::size_t frontier)> progress;
};

struct Violation {
  std::string fingerprint;  // hex digest of the canonical table
  PointId request = -1;
  Value extended_cost = 0;
  Value potential_change = 0;
};

struct EnumerationResult {
  std::size_t states = 0;
  std::size_t expanded = 0;
  bool complete = false;
  std::vector<Violation> violations;
  std::size_t violation_classes = 0;  // distinct fingerprints among violations
  std::optional<std::filesystem::path> checkpoint;
};

/// Breadth-first closure of canonical work functions under the request
/// alphabet, testing every state against server requests on the
/// destination grid for laziness violations.
EnumerationResult enumerate_reachable(const EnumerationOptions& options);

/// Fingerprint of a work function on the enumeration grid (the same string
/// enumerate_reachable reports).
std::string fingerprint(const WorkFunction& w, int dest_step = 2);

}  // namespace kserver

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kserver/work_function.hpp"

namespace kserver {

enum class Formulation { server, evader, lazy_k3, mst };
std::string_view to_string(Formulation f);

struct PotentialReport {
  Value value = 0;
  Formulation formulation = Formulation::server;
  /// Tuple x_1..x_k (server form) or permutation y_1..y_n (evader form).
  std::vector<PointId> achiever;
  /// Every minimising tuple in lexicographic order (server form only).
  std::vector<std::vector<PointId>> all_achievers;
  /// Summands of the achiever in formula order.
  std::vector<Value> terms;
};

/// Which points the tuple scan ranges over.
enum class TupleScope { original, all };

/// The configuration of summand i: i copies of the antipode of x_i followed by
/// x_{i+1}..x_k (1-based, i = 0..k).
Configuration potential_term_config(const MetricSpace& space, std::span<const PointId> tuple, int i);
std::vector<Value> server_potential_terms(const WorkFunction& w, std::span<const PointId> tuple);
/// Sum of the k+1 terms. The space must have an antipode for every point.
Value server_potential_at(const WorkFunction& w, std::span<const PointId> tuple);
/// Minimum over all tuples in scope; ties are all reported.
PotentialReport server_potential(const WorkFunction& w, TupleScope scope = TupleScope::original);
/// Value of the minimum by eliminating x_1, x_2, ... in turn; candidates
/// default to the scope's points. Optionally fixes x_k.
Value server_potential_value(const WorkFunction& w, std::span<const PointId> candidates,
                             std::optional<PointId> last = std::nullopt);
/// Minimum over tuples whose last entry is `last`.
PotentialReport server_potential_with_last(const WorkFunction& w, PointId last,
                                           TupleScope scope = TupleScope::original);
/// The tuple minimum is attained with x_k = r.
bool check_last_request_attains(const WorkFunction& w, PointId r,
                                TupleScope scope = TupleScope::original);

/// Evader view: w_hat(C) = w(M \ C) over sets. Given a permutation, returns
/// that permutation's value; otherwise the minimum over all permutations,
/// found by a dynamic program over prefixes (n <= 20).
PotentialReport evader_potential(const WorkFunction& w,
                                 std::optional<std::span<const PointId>> permutation = std::nullopt);
/// Minimum over permutations ending in `last`.
PotentialReport evader_potential_with_last(const WorkFunction& w, PointId last);
/// cl(M) - k(k+1)/2 * diameter: evader value minus this equals the server value.
Value evader_server_shift(const MetricSpace& space, int k);

struct LazySequence {
  std::vector<PointId> requests;
  std::vector<Value> extended_costs;
  WorkFunction final;
  Value total_extended_cost() const;
};

/// Default step bound 10 * k * n * diameter.
Value default_lazy_step_bound(const WorkFunction& w);
/// Requests x_i for the largest i whose request changes the work function
/// until none does. Throws ErrorKind::budget past `step_bound` and
/// ErrorKind::invariant if the result is not the cone at the tuple.
LazySequence lazy_sequence(const WorkFunction& w, std::span<const PointId> tuple,
                           std::optional<Value> step_bound = std::nullopt);
/// Phi_x(w) = k(k+1)/2 * diameter - cl(x) + (k+1) w(x) - total lazy extended cost.
bool verify_perm_intuition(const WorkFunction& w, std::span<const PointId> tuple);

enum class LazyMode {
  restricted,  // best ordering's lazy sequence for each 3-point set
  exhaustive,  // true supremum over all request sequences inside the set
};
/// 6 * diameter + min over 3-point sets X of [4 w(X) - cl(X) - max extended
/// cost of a request sequence inside X]. Requires k = 3.
PotentialReport lazy_potential_k3(const WorkFunction& w, LazyMode mode = LazyMode::restricted,
                                  std::size_t state_budget = 200000);
/// Longest total extended cost over request sequences drawn from `points`
/// (memoised search over the finite DAG of reachable tables).
Value max_extended_cost_within(const WorkFunction& w, std::span<const PointId> points,
                               std::size_t state_budget = 200000);

struct PushWitness {
  std::vector<PointId> set;  // contains the last request
  Value best_any = 0;
  Value best_last = 0;
};
/// For every set X of k distinct points containing the last request r,
/// min over orderings of X equals min over orderings ending in r. Lemma for
/// k = 3; for other k this is a search harness.
Verdict<PushWitness> check_push(const WorkFunction& w, TupleScope scope = TupleScope::original);
inline bool check_push3(const WorkFunction& w) { return check_push(w).holds; }

/// Phi(w ^ r) - Phi(w) - extended_cost(w, r); negative means laziness fails.
Value laziness_gap(const WorkFunction& w, PointId r);

struct MstReport {
  Value value = 0;
  std::vector<std::pair<PointId, PointId>> edges;
  std::optional<PointId> last_request;
  /// Some minimum spanning tree has the last request as a leaf.
  bool last_request_is_leaf = false;
};
/// k = n - 2: minimum spanning tree under weights w(M \ {x,y}) + d(x,y).
/// Equals the evader potential exactly.
MstReport mst_evader_potential(const WorkFunction& w);

}  // namespace kserver

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "kserver/generators.hpp"

namespace kserver {

/// Randomised property suites over reachable work functions.
enum class Suite {
  duality,             // check_duality at a random request
  quasiconvex,         // is_quasiconvex
  lipschitz,           // is_lipschitz
  lemmas,              // quasiMin, quasiSub, quasiGreedy, resolveMonotone
  update_equivalence,  // update against min over X containing r of w(X) + d(X, C)
  perm_intuition,      // verify_perm_intuition at a random tuple
  push3,               // check_push (k = 3)
  equivalence,         // server and evader potentials agree after the shift
  mst_leaf,            // spanning-tree potential (k = n - 2)
  theorem_xk_r,        // the tuple minimum is attained with x_k = r
  monotone,            // Phi(w ^ r) >= Phi(w)
  lazy_k3,             // lazy_potential_k3 equals server_potential
};

std::string_view to_string(Suite s);
Suite parse_suite(std::string_view name);
std::vector<Suite> all_suites();

struct SuiteOptions {
  /// Base space. Potential suites run on its antipodal extension with starts
  /// and requests drawn from the base points; equivalence additionally adds k
  /// copies of every point.
  SpacePtr space;
  int k = 2;
  std::size_t cases = 100;
  std::uint64_t seed = 1;
  int max_requests = 8;
};

struct SuiteResult {
  Suite suite = Suite::duality;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::optional<std::string> first_witness;
  /// Dump of the first failing work function (work_function_to_json).
  std::optional<nlohmann::json> witness_table;
  bool passed() const { return failures == 0; }
};

SuiteResult run_suite(Suite suite, const SuiteOptions& options);

/// The same check on one given table; used to re-validate ingested witnesses.
/// `r` defaults to the table's last request where one is needed.
SuiteResult check_table(Suite suite, const WorkFunction& w, std::optional<PointId> r = std::nullopt);

}  // namespace kserver

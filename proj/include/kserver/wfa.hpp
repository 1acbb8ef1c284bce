#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kserver/work_function.hpp"

namespace kserver {

struct TieBreak {
  enum class Policy { lexicographic, prefer_server, first_found };
  Policy policy = Policy::lexicographic;
  PointId server = -1;  // initial position of the preferred server

  static TieBreak lexicographic() { return {}; }
  static TieBreak first_found() { return {Policy::first_found, -1}; }
  static TieBreak prefer_server(PointId p) { return {Policy::prefer_server, p}; }
};

std::string to_string(const TieBreak& tie, const MetricSpace& space);
/// "lexicographic", "first", or "prefer:<point>".
TieBreak parse_tie_break(std::string_view text, const MetricSpace& space);

struct Trajectory {
  TieBreak tie;
  std::vector<PointId> requests;
  std::vector<Configuration> configurations;  // C_0..C_T
  std::vector<Value> costs;                   // d(C_{t-1}, C_t)
  std::vector<Value> extended_costs;          // max_X w_t(X) - w_{t-1}(X)
  std::vector<Value> pinned_costs;            // w_t(C_{t-1}) - w_{t-1}(C_{t-1})
  std::vector<PointId> tracked_server;        // position of the preferred server, if any
  std::vector<WorkFunction> work_functions;   // w_0..w_T when kept
  WorkFunction final;

  Value total_cost() const;
};

/// Serves each request with C_t containing r_t minimising d(C_{t-1}, C_t) + w_t(C_t).
Trajectory run_wfa(const ConfigSpacePtr& configs, const Configuration& c0,
                   std::span<const PointId> requests, TieBreak tie, bool keep_work_functions = true);

/// min_X w(X).
Value offline_opt(const WorkFunction& w);

struct LedgerReport {
  std::vector<Value> extended;     // per step
  std::vector<Value> pinned;       // per step
  std::vector<Value> cumulative;   // running sum of extended
  Value total_extended = 0;
  Value total_pinned = 0;
  Value wfa_cost = 0;
  Value opt = 0;
  /// total_pinned == wfa_cost + w_T(C_T) - w_0(C_0), which every trajectory satisfies.
  bool pinned_identity = false;
  /// Smallest c with total_extended + c >= wfa_cost + opt.
  Value slack_needed = 0;
};

LedgerReport extended_cost_ledger(const Trajectory& t);

struct AdversarySpec {
  enum class Mode { exhaustive, random };
  Mode mode = Mode::exhaustive;
  int max_length = 6;
  std::uint64_t seed = 1;
  std::size_t random_sequences = 1000;
  std::size_t node_budget = 50'000'000;
};

struct RatioReport {
  int k = 0;
  Value additive_allowance = 0;  // k^2 * diameter
  Value worst_excess = 0;        // max of cost - k * OPT
  std::vector<PointId> worst_sequence;
  Configuration worst_start;
  std::size_t sequences = 0;
  std::size_t violations = 0;  // sequences with cost > k * OPT + allowance
  bool complete = true;
};

/// Runs WFA (lexicographic ties) against generated request sequences from
/// every start in `starts`.
RatioReport ratio_report(const ConfigSpacePtr& configs, std::span<const Configuration> starts,
                         const AdversarySpec& spec);

}  // namespace kserver

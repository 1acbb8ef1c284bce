#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kserver/potential.hpp"
#include "kserver/taxi.hpp"

namespace kserver {

struct ReplayOptions {
  Value scale = 2;
  /// Defaults to preferring the server that starts at 6.
  std::optional<std::string> tie;
  Value refine = 8;  // dense-expansion factor for the WFA run
};

struct StageSnapshot {
  std::string label;
  WorkFunction w;
  SupportSet support;
};

/// One summand of a Phi upper bound: w(term) <= w(via) + moves.
struct BoundTerm {
  Configuration term;
  Configuration via;
  Value via_value = 0;
  std::vector<Value> moves;
  Value total() const;
};

struct CounterexampleReport {
  SpacePtr space;
  std::vector<StageSnapshot> stages;  // w_0, after (a)..(f), and w_{t+1}
  RequestSeq events;                  // (a)..(f) then the request at 4

  Configuration wfa_config;           // C_t
  bool single_server = false;         // every request served by the tracked server
  Value w_t_at_ct = 0;
  Value w_t1_at_ct = 0;
  Value pinned_increase = 0;          // w_{t+1}(C_t) - w_t(C_t)
  Value extended_cost = 0;            // nabla(w_t, 4)

  PotentialReport phi_t;
  PotentialReport phi_t1;
  std::vector<PointId> bound_tuple;   // (5, 7, 2)
  std::vector<Value> bound_tuple_terms;
  std::vector<BoundTerm> bound_terms;
  Value bound_total = 0;
  Value gap = 0;                      // laziness_gap(w_t, 4)

  std::vector<std::string> mismatches;
  bool ok() const { return mismatches.empty(); }
};

/// Circle of circumference 8 with 3 servers starting at {1, 6, 7}; requests
/// (6.5,6), 4, (2.5,2), 3, 4, (3.5,5), then 4. Work functions use the closed
/// taxi update; the WFA configuration comes from a dense simulation.
CounterexampleReport replay_counterexample(const ReplayOptions& options = {});

}  // namespace kserver

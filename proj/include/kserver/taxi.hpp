#pragma once

#include <variant>
#include <vector>

#include "kserver/wfa.hpp"
#include "kserver/work_function.hpp"

namespace kserver {

enum class Orientation { clockwise, counterclockwise };

struct ServerRequest {
  PointId point;
};

/// Easy k-taxi request: some server travels to `start` and then to `dest`.
/// The orientation only matters when the two are antipodal.
struct TaxiRequest {
  PointId start;
  PointId dest;
  Orientation orientation = Orientation::clockwise;
};

using Event = std::variant<ServerRequest, TaxiRequest>;
using RequestSeq = std::vector<Event>;

/// {S - s + t : S in supp(w ^ s)}.
std::vector<Configuration> taxi_support_image(const WorkFunction& w, PointId s, PointId t);

/// Limit of simulating (s, t) by dense server requests along the shortest
/// arc: issue s, then rebuild the table from the transformed support with
/// values w(S) + d(s, t). Circles only.
WorkFunction taxi_update_closed(const WorkFunction& w, PointId s, PointId t);

/// Same limit via the exchange form
///   w'(C) = d(s,t) + min over x in C of w(C - x + s) + d(x, t),
/// which needs no support computation.
WorkFunction taxi_update(const WorkFunction& w, PointId s, PointId t);

/// Coarse-configuration values of w ^ r_1 ^ ... ^ r_m for m equally spaced
/// points from s to t, in units of 1/(scale * factor).
struct SimulatedTaxi {
  std::vector<Value> values;
  Value factor = 1;   // refinement of the scale
  Value epsilon = 0;  // spacing of the requests, refined units
  int m = 2;
};

SimulatedTaxi taxi_update_simulated(const WorkFunction& w, const TaxiRequest& request, int m);

/// max over C of closed(C) * factor - simulated(C), and the corresponding minimum.
struct TaxiDeviation {
  Value max_below = 0;  // closed - simulated, refined units
  Value min_below = 0;
  Value allowance = 0;  // 2 k epsilon, refined units
  bool within() const { return min_below >= 0 && max_below <= allowance; }
};
TaxiDeviation taxi_deviation(const WorkFunction& closed, const SimulatedTaxi& simulated);

/// Circle sub-space holding the coarse points and every point of a dense
/// expansion of the events, at scale * factor.
struct Refinement {
  SpacePtr space;
  Value factor = 1;
  std::vector<PointId> from_coarse;  // coarse point -> refined point
  std::vector<PointId> requests;     // expanded server requests (refined ids)
  std::vector<std::size_t> event_end;  // requests.size() after each event
};

/// Taxi events become requests at every 1/factor grid step along their arc.
Refinement refine_events(const SpacePtr& circle, std::span<const Event> events, Value factor);

/// Extends a coarse work function to a refined circle sub-space:
/// w(C) = min over coarse X of w(X) + d(X, C).
WorkFunction lift(const WorkFunction& coarse, const ConfigSpacePtr& fine,
                  std::span<const PointId> from_coarse, Value factor);

/// Applies events with taxi_update (or update for server requests).
WorkFunction apply_events(const WorkFunction& w, std::span<const Event> events);

/// Runs WFA on the dense expansion of the events.
struct SimulatedRun {
  Refinement refinement;
  Trajectory trajectory;
};
SimulatedRun simulate_wfa(const SpacePtr& circle, int k, const Configuration& c0,
                          std::span<const Event> events, TieBreak tie, Value factor,
                          bool keep_work_functions = false);

}  // namespace kserver

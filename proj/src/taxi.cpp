#include "kserver/taxi.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <numeric>

#include "kserver/error.hpp"

namespace kserver {

namespace {

constexpr Value kInf = std::numeric_limits<Value>::max() / 4;

void require_circle(const MetricSpace& space) {
  if (!space.is_circle() || space.circumference() == 0)
    fail(ErrorKind::unsupported, "closed-form taxi updates are defined on circles only; use the simulated path");
}

Value grid_unit(const MetricSpace& circle) {
  Value g = circle.circumference();
  for (Value p : circle.positions()) g = std::gcd(g, p);
  return g;
}

// +1 when the shortest arc from a to b runs towards larger positions; ties
// (antipodal points) follow the orientation.
int arc_direction(Value a, Value b, Value circumference, Orientation o) {
  const Value forward = ((b - a) % circumference + circumference) % circumference;
  const Value backward = circumference - forward;
  if (forward == 0) return 1;
  if (forward < backward) return 1;
  if (backward < forward) return -1;
  return o == Orientation::clockwise ? 1 : -1;
}

Value wrap(Value p, Value circumference) { return ((p % circumference) + circumference) % circumference; }

}  // namespace

std::vector<Configuration> taxi_support_image(const WorkFunction& w, PointId s, PointId t) {
  const WorkFunction ws = update(w, s);
  std::vector<Configuration> out;
  for (std::size_t idx : support(ws).members) out.push_back(w.configs().at(idx).replaced(s, t));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

WorkFunction taxi_update_closed(const WorkFunction& w, PointId s, PointId t) {
  require_circle(w.metric());
  const ConfigSpace& cs = w.configs();
  const WorkFunction ws = update(w, s);
  const SupportSet base = support(ws);
  SupportSet moved;
  const Value dst = w.metric().distance(s, t);
  for (std::size_t i = 0; i < base.members.size(); ++i) {
    moved.members.push_back(cs.index_of(cs.at(base.members[i]).replaced(s, t)));
    moved.values.push_back(base.values[i] + dst);
  }
  return WorkFunction(w.configs_ptr(), reconstruct_from_support(cs, moved), t, w.origin());
}

WorkFunction taxi_update(const WorkFunction& w, PointId s, PointId t) {
  require_circle(w.metric());
  const ConfigSpace& cs = w.configs();
  const MetricSpace& m = cs.metric();
  const Value dst = m.distance(s, t);
  std::vector<Value> out(w.size());
  for (std::size_t idx = 0; idx < w.size(); ++idx) {
    const Configuration& c = cs.at(idx);
    Value best = kInf;
    for (int pos = 0; pos < cs.k(); ++pos) best = std::min(best, w.at(cs.replace(idx, pos, s)) + m.distance(c[pos], t));
    out[idx] = dst + best;
  }
  return WorkFunction(w.configs_ptr(), std::move(out), t, w.origin());
}

Refinement refine_events(const SpacePtr& circle, std::span<const Event> events, Value factor) {
  require_circle(*circle);
  require(factor >= 1, "refinement factor must be positive");
  const Value circ = circle->circumference() * factor;
  const Value unit = grid_unit(*circle);
  std::vector<Value> positions;
  for (Value p : circle->positions()) positions.push_back(p * factor);
  std::vector<std::vector<Value>> expanded;
  for (const Event& e : events) {
    std::vector<Value> pts;
    if (const auto* r = std::get_if<ServerRequest>(&e)) {
      pts.push_back(circle->positions()[static_cast<std::size_t>(r->point)] * factor);
    } else {
      const auto& tx = std::get<TaxiRequest>(e);
      const Value a = circle->positions()[static_cast<std::size_t>(tx.start)] * factor;
      const Value b = circle->positions()[static_cast<std::size_t>(tx.dest)] * factor;
      const int dir = arc_direction(a, b, circ, tx.orientation);
      const Value length = circle->distance(tx.start, tx.dest) * factor;
      for (Value step = 0; step <= length; step += unit) pts.push_back(wrap(a + dir * step, circ));
    }
    positions.insert(positions.end(), pts.begin(), pts.end());
    expanded.push_back(std::move(pts));
  }
  std::sort(positions.begin(), positions.end());
  positions.erase(std::unique(positions.begin(), positions.end()), positions.end());
  Refinement out;
  out.factor = factor;
  out.space = build_circle_subset(positions, circ, circle->scale() * factor);
  auto id_of = [&](Value p) {
    return static_cast<PointId>(std::lower_bound(positions.begin(), positions.end(), p) - positions.begin());
  };
  for (Value p : circle->positions()) out.from_coarse.push_back(id_of(p * factor));
  for (const auto& pts : expanded) {
    for (Value p : pts) out.requests.push_back(id_of(p));
    out.event_end.push_back(out.requests.size());
  }
  return out;
}

WorkFunction lift(const WorkFunction& coarse, const ConfigSpacePtr& fine, std::span<const PointId> from_coarse,
                  Value factor) {
  const MetricSpace& cm = coarse.metric();
  const MetricSpace& fm = fine->metric();
  require_circle(cm);
  require_circle(fm);
  require(fine->k() == coarse.k(), "lift between different k");
  const int k = coarse.k();
  // Each fine point reaches the coarse grid through one of its two grid neighbours.
  std::vector<Value> grid;
  for (Value p : cm.positions()) grid.push_back(p * factor);
  const Value circ = fm.circumference();
  std::vector<std::vector<std::pair<PointId, Value>>> options(static_cast<std::size_t>(fm.size()));
  for (PointId q = 0; q < fm.size(); ++q) {
    const Value pos = fm.positions()[static_cast<std::size_t>(q)];
    auto exact = std::find(from_coarse.begin(), from_coarse.end(), q);
    if (exact != from_coarse.end()) {
      options[static_cast<std::size_t>(q)].push_back({static_cast<PointId>(exact - from_coarse.begin()), 0});
      continue;
    }
    auto hi = std::upper_bound(grid.begin(), grid.end(), pos);
    const std::size_t succ = hi == grid.end() ? 0 : static_cast<std::size_t>(hi - grid.begin());
    const std::size_t pred = hi == grid.begin() ? grid.size() - 1 : static_cast<std::size_t>(hi - grid.begin()) - 1;
    for (std::size_t g : {pred, succ}) {
      const Value gap = std::abs(grid[g] - pos);
      options[static_cast<std::size_t>(q)].push_back({static_cast<PointId>(g), std::min(gap, circ - gap)});
    }
  }
  std::vector<Value> out(fine->size());
  for (std::size_t idx = 0; idx < fine->size(); ++idx) {
    const Configuration& c = fine->at(idx);
    Value best = kInf;
    std::array<int, kMaxServers> choice{};
    for (;;) {
      std::array<PointId, kMaxServers> pts{};
      Value offset = 0;
      for (int i = 0; i < k; ++i) {
        const auto& opt = options[static_cast<std::size_t>(c[i])][static_cast<std::size_t>(choice[static_cast<std::size_t>(i)])];
        pts[static_cast<std::size_t>(i)] = opt.first;
        offset += opt.second;
      }
      std::sort(pts.begin(), pts.begin() + k);
      best = std::min(best, coarse.at(coarse.configs().rank_sorted(pts.data())) * factor + offset);
      int i = 0;
      while (i < k && ++choice[static_cast<std::size_t>(i)] ==
                          static_cast<int>(options[static_cast<std::size_t>(c[i])].size()))
        choice[static_cast<std::size_t>(i++)] = 0;
      if (i == k) break;
    }
    out[idx] = best;
  }
  std::optional<PointId> last;
  if (coarse.last_request()) last = from_coarse[static_cast<std::size_t>(*coarse.last_request())];
  return WorkFunction(fine, std::move(out), last, coarse.origin());
}

SimulatedTaxi taxi_update_simulated(const WorkFunction& w, const TaxiRequest& request, int m) {
  require(m >= 2, "simulation needs m >= 2 points");
  const MetricSpace& cm = w.metric();
  require_circle(cm);
  const Value d = cm.distance(request.start, request.dest);
  // Spacing d / (m - 1) must be a whole number of refined units.
  const Value factor = (m - 1) / std::gcd(d, static_cast<Value>(m - 1));
  const Value circ = cm.circumference() * factor;
  const Value a = cm.positions()[static_cast<std::size_t>(request.start)] * factor;
  const Value b = cm.positions()[static_cast<std::size_t>(request.dest)] * factor;
  const int dir = arc_direction(a, b, circ, request.orientation);
  const Value eps = d * factor / (m - 1);
  std::vector<Value> positions, reqs;
  for (Value p : cm.positions()) positions.push_back(p * factor);
  for (int j = 0; j < m; ++j) reqs.push_back(wrap(a + dir * eps * j, circ));
  positions.insert(positions.end(), reqs.begin(), reqs.end());
  std::sort(positions.begin(), positions.end());
  positions.erase(std::unique(positions.begin(), positions.end()), positions.end());
  auto id_of = [&](Value p) {
    return static_cast<PointId>(std::lower_bound(positions.begin(), positions.end(), p) - positions.begin());
  };
  auto fine = ConfigSpace::create(build_circle_subset(positions, circ, cm.scale() * factor), w.k());
  std::vector<PointId> from_coarse;
  for (Value p : cm.positions()) from_coarse.push_back(id_of(p * factor));
  WorkFunction cur = lift(w, fine, from_coarse, factor);
  for (Value p : reqs) cur = update(cur, id_of(p));
  SimulatedTaxi out;
  out.factor = factor;
  out.epsilon = eps;
  out.m = m;
  out.values.resize(w.size());
  for (std::size_t idx = 0; idx < w.size(); ++idx) {
    std::array<PointId, kMaxServers> pts{};
    const Configuration& c = w.configs().at(idx);
    for (int i = 0; i < c.size(); ++i) pts[static_cast<std::size_t>(i)] = from_coarse[static_cast<std::size_t>(c[i])];
    out.values[idx] = cur.at(fine->rank_sorted(pts.data()));
  }
  return out;
}

TaxiDeviation taxi_deviation(const WorkFunction& closed, const SimulatedTaxi& simulated) {
  require(closed.size() == simulated.values.size(), "deviation between different spaces");
  TaxiDeviation out;
  out.max_below = std::numeric_limits<Value>::min();
  out.min_below = std::numeric_limits<Value>::max();
  for (std::size_t i = 0; i < closed.size(); ++i) {
    const Value diff = closed.at(i) * simulated.factor - simulated.values[i];
    out.max_below = std::max(out.max_below, diff);
    out.min_below = std::min(out.min_below, diff);
  }
  out.allowance = 2 * closed.k() * simulated.epsilon;
  return out;
}

WorkFunction apply_events(const WorkFunction& w, std::span<const Event> events) {
  WorkFunction cur = w;
  for (const Event& e : events) {
    if (const auto* r = std::get_if<ServerRequest>(&e))
      cur = update(cur, r->point);
    else
      cur = taxi_update(cur, std::get<TaxiRequest>(e).start, std::get<TaxiRequest>(e).dest);
  }
  return cur;
}

SimulatedRun simulate_wfa(const SpacePtr& circle, int k, const Configuration& c0, std::span<const Event> events,
                          TieBreak tie, Value factor, bool keep_work_functions) {
  Refinement refinement = refine_events(circle, events, factor);
  auto configs = ConfigSpace::create(refinement.space, k);
  std::vector<PointId> start;
  for (PointId p : c0) start.push_back(refinement.from_coarse[static_cast<std::size_t>(p)]);
  if (tie.policy == TieBreak::Policy::prefer_server)
    tie.server = refinement.from_coarse[static_cast<std::size_t>(tie.server)];
  Trajectory trajectory = run_wfa(configs, Configuration(std::span<const PointId>(start)), refinement.requests, tie,
                                  keep_work_functions);
  return SimulatedRun{std::move(refinement), std::move(trajectory)};
}

}  // namespace kserver

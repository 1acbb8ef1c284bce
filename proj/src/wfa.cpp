#include "kserver/wfa.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>

#include "kserver/error.hpp"

namespace kserver {

namespace {

constexpr Value kInf = std::numeric_limits<Value>::max() / 4;

// Where each point of `from` goes under a cheapest matching onto `to`;
// shared points stay put and ties go to the first permutation found.
std::vector<std::pair<PointId, PointId>> optimal_matching(const Configuration& from, const Configuration& to,
                                                          const MetricSpace& space) {
  Configuration a = from.minus(to), b = to.minus(from);
  std::vector<std::pair<PointId, PointId>> out;
  for (PointId p : from.minus(a)) out.emplace_back(p, p);
  std::vector<int> perm(static_cast<std::size_t>(a.size()));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best = perm;
  Value best_cost = kInf;
  do {
    Value c = 0;
    for (int i = 0; i < a.size(); ++i) c += space.distance(a[i], b[perm[static_cast<std::size_t>(i)]]);
    if (c < best_cost) best_cost = c, best = perm;
  } while (std::next_permutation(perm.begin(), perm.end()));
  for (int i = 0; i < a.size(); ++i) out.emplace_back(a[i], b[best[static_cast<std::size_t>(i)]]);
  return out;
}

struct StepResult {
  Configuration next;
  PointId tracked = -1;
};

StepResult wfa_step(const WorkFunction& w, const Configuration& prev, PointId r, const TieBreak& tie, PointId tracked) {
  const ConfigSpace& cs = w.configs();
  const MetricSpace& space = cs.metric();
  Value best = kInf;
  std::vector<std::size_t> argmin;
  for (std::size_t idx = 0; idx < cs.size(); ++idx) {
    const Configuration& d = cs.at(idx);
    if (!d.contains(r)) continue;
    Value v = matching_distance(prev, d, space) + w.at(idx);
    if (v < best) {
      best = v;
      argmin.clear();
    }
    if (v == best) argmin.push_back(idx);
  }
  StepResult out;
  out.tracked = tracked;
  auto lexicographic = [&] {
    return cs.at(*std::min_element(argmin.begin(), argmin.end(),
                                   [&](std::size_t a, std::size_t b) { return cs.at(a) < cs.at(b); }));
  };
  switch (tie.policy) {
    case TieBreak::Policy::first_found:
      out.next = cs.at(argmin.front());
      break;
    case TieBreak::Policy::lexicographic:
      out.next = lexicographic();
      break;
    case TieBreak::Policy::prefer_server: {
      const Configuration preferred = prev.replaced(tracked, r);
      const bool available = std::any_of(argmin.begin(), argmin.end(), [&](std::size_t i) { return cs.at(i) == preferred; });
      if (available) {
        out.next = preferred;
        out.tracked = r;
      } else {
        out.next = lexicographic();
        for (auto [from, to] : optimal_matching(prev, out.next, space))
          if (from == tracked) {
            out.tracked = to;
            break;
          }
      }
      break;
    }
  }
  return out;
}

}  // namespace

std::string to_string(const TieBreak& tie, const MetricSpace& space) {
  switch (tie.policy) {
    case TieBreak::Policy::lexicographic: return "lexicographic";
    case TieBreak::Policy::first_found: return "first";
    case TieBreak::Policy::prefer_server: return "prefer:" + space.label(tie.server);
  }
  return "lexicographic";
}

TieBreak parse_tie_break(std::string_view text, const MetricSpace& space) {
  if (text == "lexicographic") return TieBreak::lexicographic();
  if (text == "first") return TieBreak::first_found();
  if (text.substr(0, 7) == "prefer:") return TieBreak::prefer_server(space.point(text.substr(7)));
  fail(ErrorKind::parse, "unknown tie-break policy '" + std::string(text) + "'");
}

Value Trajectory::total_cost() const { return std::accumulate(costs.begin(), costs.end(), Value{0}); }

Trajectory run_wfa(const ConfigSpacePtr& configs, const Configuration& c0, std::span<const PointId> requests,
                   TieBreak tie, bool keep_work_functions) {
  configs->index_of(c0);
  const MetricSpace& space = configs->metric();
  if (tie.policy == TieBreak::Policy::prefer_server && !c0.contains(tie.server))
    fail(ErrorKind::invalid_input, "preferred server " + space.label(tie.server) + " is not in the start configuration");
  Trajectory t{tie, {}, {c0}, {}, {}, {}, {}, {}, WorkFunction::cone(configs, c0)};
  PointId tracked = tie.policy == TieBreak::Policy::prefer_server ? tie.server : -1;
  if (keep_work_functions) t.work_functions.push_back(t.final);
  for (PointId r : requests) {
    if (r < 0 || r >= space.size()) fail(ErrorKind::invalid_input, "request " + std::to_string(r) + " outside the space");
    const Configuration& prev = t.configurations.back();
    WorkFunction next = update(t.final, r);
    StepResult step = wfa_step(next, prev, r, tie, tracked);
    t.requests.push_back(r);
    t.costs.push_back(matching_distance(prev, step.next, space));
    t.extended_costs.push_back(extended_cost(t.final, next));
    t.pinned_costs.push_back(next(prev) - t.final(prev));
    tracked = step.tracked;
    if (tie.policy == TieBreak::Policy::prefer_server) t.tracked_server.push_back(tracked);
    t.configurations.push_back(step.next);
    t.final = std::move(next);
    if (keep_work_functions) t.work_functions.push_back(t.final);
  }
  return t;
}

Value offline_opt(const WorkFunction& w) { return w.min_value(); }

LedgerReport extended_cost_ledger(const Trajectory& t) {
  LedgerReport out;
  out.extended = t.extended_costs;
  out.pinned = t.pinned_costs;
  Value run = 0;
  for (Value v : t.extended_costs) out.cumulative.push_back(run += v);
  out.total_extended = run;
  out.total_pinned = std::accumulate(t.pinned_costs.begin(), t.pinned_costs.end(), Value{0});
  out.wfa_cost = t.total_cost();
  out.opt = offline_opt(t.final);
  // The run starts from a cone at C_0, so w_0(C_0) = 0.
  out.pinned_identity = out.total_pinned == out.wfa_cost + t.final(t.configurations.back());
  out.slack_needed = std::max<Value>(0, out.wfa_cost + out.opt - out.total_extended);
  return out;
}

namespace {

struct Harness {
  const ConfigSpacePtr& configs;
  const AdversarySpec& spec;
  RatioReport& report;
  std::vector<PointId> seq;
  std::size_t nodes = 0;

  void record(const WorkFunction& w, Value cost, const Configuration& start) {
    ++report.sequences;
    const Value excess = cost - report.k * offline_opt(w);
    if (excess > report.additive_allowance) ++report.violations;
    if (excess > report.worst_excess) {
      report.worst_excess = excess;
      report.worst_sequence = seq;
      report.worst_start = start;
    }
  }

  void dfs(const WorkFunction& w, const Configuration& c, Value cost, const Configuration& start) {
    if (static_cast<int>(seq.size()) == spec.max_length) return;
    for (PointId r = 0; r < configs->num_points(); ++r) {
      if (++nodes > spec.node_budget) {
        report.complete = false;
        return;
      }
      WorkFunction next = update(w, r);
      StepResult step = wfa_step(next, c, r, TieBreak::lexicographic(), -1);
      const Value step_cost = matching_distance(c, step.next, configs->metric());
      seq.push_back(r);
      record(next, cost + step_cost, start);
      dfs(next, step.next, cost + step_cost, start);
      seq.pop_back();
      if (!report.complete) return;
    }
  }
};

}  // namespace

RatioReport ratio_report(const ConfigSpacePtr& configs, std::span<const Configuration> starts, const AdversarySpec& spec) {
  RatioReport report;
  report.k = configs->k();
  report.additive_allowance = static_cast<Value>(report.k) * report.k * configs->metric().diameter();
  report.worst_excess = std::numeric_limits<Value>::min();
  Harness h{configs, spec, report, {}, 0};
  if (spec.mode == AdversarySpec::Mode::exhaustive) {
    for (const Configuration& start : starts) {
      h.dfs(WorkFunction::cone(configs, start), start, 0, start);
      if (!report.complete) break;
    }
    return report;
  }
  require(!starts.empty(), "no start configurations");
  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<PointId> point(0, configs->num_points() - 1);
  std::uniform_int_distribution<std::size_t> pick(0, starts.size() - 1);
  for (std::size_t s = 0; s < spec.random_sequences; ++s) {
    const Configuration start = starts[pick(rng)];
    h.seq.clear();
    for (int i = 0; i < spec.max_length; ++i) h.seq.push_back(point(rng));
    Trajectory t = run_wfa(configs, start, h.seq, TieBreak::lexicographic(), false);
    h.record(t.final, t.total_cost(), start);
  }
  return report;
}

}  // namespace kserver

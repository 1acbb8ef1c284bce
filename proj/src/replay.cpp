#include "kserver/replay.hpp"

#include <numeric>

#include "kserver/error.hpp"

namespace kserver {

Value BoundTerm::total() const { return std::accumulate(moves.begin(), moves.end(), via_value); }

namespace {

struct Replay {
  const ReplayOptions& options;
  CounterexampleReport& report;
  Value scale;
  ConfigSpacePtr configs;

  PointId pt(std::string_view text) const { return report.space->point(text); }
  Value units(Value v) const { return v * scale; }
  std::string show(Value v) const { return format_scaled(v, scale); }

  Configuration config(std::initializer_list<std::string_view> pts) const {
    std::vector<PointId> ids;
    for (auto p : pts) ids.push_back(pt(p));
    return Configuration(std::span<const PointId>(ids));
  }

  void expect(bool ok, std::string what) {
    if (!ok) report.mismatches.push_back(std::move(what));
  }

  void expect_value(std::string_view what, Value got, Value want) {
    expect(got == units(want), std::string(what) + " is " + show(got) + ", expected " + std::to_string(want));
  }

  void run_stages() {
    const Configuration c0 = config({"1", "6", "7"});
    const WorkFunction cone = WorkFunction::cone(configs, c0);
    WorkFunction cur(configs, {cone.values().begin(), cone.values().end()}, pt("6"), Origin::reachable);
    report.stages.push_back({"w_0", cur, support(cur)});
    report.events = {TaxiRequest{pt("6.5"), pt("6")}, ServerRequest{pt("4")}, TaxiRequest{pt("2.5"), pt("2")},
                     ServerRequest{pt("3")},          ServerRequest{pt("4")}, TaxiRequest{pt("3.5"), pt("5")},
                     ServerRequest{pt("4")}};
    const char* labels[] = {"(a)", "(b)", "(c)", "(d)", "(e)", "(f)", "w_{t+1}"};
    for (std::size_t i = 0; i < report.events.size(); ++i) {
      const Event& e = report.events[i];
      WorkFunction next = cur;
      if (const auto* r = std::get_if<ServerRequest>(&e)) {
        next = update(cur, r->point);
      } else {
        const auto& tx = std::get<TaxiRequest>(e);
        next = taxi_update_closed(cur, tx.start, tx.dest);
        expect(next == taxi_update(cur, tx.start, tx.dest),
               std::string("closed and exchange taxi updates disagree at ") + labels[i]);
      }
      cur = std::move(next);
      report.stages.push_back({labels[i], cur, support(cur)});
    }
  }

  void run_wfa_stage() {
    const std::size_t t = report.events.size() - 1;
    const TieBreak tie = options.tie ? parse_tie_break(*options.tie, *report.space) : TieBreak::prefer_server(pt("6"));
    const SimulatedRun run = simulate_wfa(report.space, 3, config({"1", "6", "7"}),
                                          std::span<const Event>(report.events.data(), t), tie, options.refine);
    const MetricSpace& fine = *run.refinement.space;
    std::vector<PointId> coarse;
    for (PointId p : run.trajectory.configurations.back()) {
      const auto it = std::find(run.refinement.from_coarse.begin(), run.refinement.from_coarse.end(), p);
      if (it == run.refinement.from_coarse.end()) {
        expect(false, "WFA ends with a server off the grid at " + fine.label(p));
        return;
      }
      coarse.push_back(static_cast<PointId>(it - run.refinement.from_coarse.begin()));
    }
    report.wfa_config = Configuration(std::span<const PointId>(coarse));
    if (tie.policy == TieBreak::Policy::prefer_server) {
      report.single_server = true;
      for (std::size_t i = 0; i < run.trajectory.requests.size(); ++i)
        report.single_server &= run.trajectory.tracked_server[i] == run.trajectory.requests[i];
    }
    expect(report.single_server, "WFA does not serve every request with the server starting at 6");
    expect(report.wfa_config == config({"1", "5", "7"}),
           "WFA configuration is " + describe(report.wfa_config) + ", expected {1, 5, 7}");
  }

  std::string describe(const Configuration& c) const {
    std::string out = "{";
    for (int i = 0; i < c.size(); ++i) out += (i ? ", " : "") + report.space->label(c[i]);
    return out + "}";
  }

  void run_potentials() {
    const WorkFunction& wt = report.stages[report.stages.size() - 2].w;
    const WorkFunction& wt1 = report.stages.back().w;
    report.extended_cost = extended_cost(wt, wt1);
    if (report.wfa_config.size() == 3) {
      report.w_t_at_ct = wt(report.wfa_config);
      report.w_t1_at_ct = wt1(report.wfa_config);
      report.pinned_increase = report.w_t1_at_ct - report.w_t_at_ct;
    }
    expect_value("w_t(C_t)", report.w_t_at_ct, 9);
    expect_value("w_{t+1}(C_t)", report.w_t1_at_ct, 11);

    report.phi_t = server_potential(wt);
    report.phi_t1 = server_potential(wt1);
    expect_value("Phi(w_t)", report.phi_t.value, 44);
    const std::vector<PointId> claimed{pt("4"), pt("5"), pt("6")};
    expect(std::find(report.phi_t.all_achievers.begin(), report.phi_t.all_achievers.end(), claimed) !=
               report.phi_t.all_achievers.end(),
           "(4, 5, 6) does not attain Phi(w_t)");
    expect(report.phi_t1.value <= units(45), "Phi(w_{t+1}) is " + show(report.phi_t1.value) + ", above 45");

    report.bound_tuple = {pt("5"), pt("7"), pt("2")};
    report.bound_tuple_terms = server_potential_terms(wt1, report.bound_tuple);
    const MetricSpace& s = *report.space;
    auto d = [&](std::string_view a, std::string_view b) { return s.distance(pt(a), pt(b)); };
    struct Row {
      Configuration term, via;
      std::vector<Value> moves;
      Value via_claim;
    };
    const Row rows[] = {
        {config({"5", "7", "2"}), config({"5", "7", "4"}), {d("2", "4")}, 8},
        {config({"1", "7", "2"}), config({"1", "7", "4"}), {d("2", "4")}, 10},
        {config({"3", "3", "2"}), config({"4", "3", "2"}), {d("3", "4")}, 11},
        {config({"6", "6", "6"}), config({"6", "5", "4"}), {d("5", "6"), d("4", "6")}, 8},
    };
    report.bound_total = 0;
    for (std::size_t i = 0; i < std::size(rows); ++i) {
      const Row& row = rows[i];
      BoundTerm b{row.term, row.via, wt1(row.via), row.moves};
      expect(potential_term_config(s, report.bound_tuple, static_cast<int>(i)) == row.term,
             "term " + std::to_string(i) + " of Phi_572 is not " + describe(row.term));
      expect_value("w_{t+1}" + describe(row.via), b.via_value, row.via_claim);
      expect(wt1(row.term) <= b.total(), "w_{t+1}" + describe(row.term) + " exceeds its bound");
      report.bound_total += b.total();
      report.bound_terms.push_back(std::move(b));
    }
    expect_value("bound on Phi(w_{t+1})", report.bound_total, 45);
    const Value phi572 = std::accumulate(report.bound_tuple_terms.begin(), report.bound_tuple_terms.end(), Value{0});
    expect(report.phi_t1.value <= phi572 && phi572 <= report.bound_total, "Phi_572 chain does not hold");

    report.gap = laziness_gap(wt, pt("4"));
    expect(report.pinned_increase >= report.phi_t1.value - report.phi_t.value + units(1),
           "pinned increase " + show(report.pinned_increase) + " is below Phi(w_{t+1}) - Phi(w_t) + 1");
    expect(report.gap <= -units(1), "laziness gap " + show(report.gap) + " is above -1");
  }
};

}  // namespace

CounterexampleReport replay_counterexample(const ReplayOptions& options) {
  if (options.scale < 2 || options.scale % 2 != 0)
    fail(ErrorKind::invalid_input, "the replay needs an even scale (6.5 is not representable at scale " +
                                       std::to_string(options.scale) + ")");
  require(options.refine >= 1, "refinement factor must be positive");
  CounterexampleReport report;
  const Value n = 8 * options.scale;
  report.space = build_circle(static_cast<int>(n), n, options.scale);
  Replay r{options, report, options.scale, ConfigSpace::create(report.space, 3)};
  r.run_stages();
  r.run_wfa_stage();
  r.run_potentials();
  return report;
}

}  // namespace kserver

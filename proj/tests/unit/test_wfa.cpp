#include "doctest.h"
#include "helpers.hpp"
#include "kserver/error.hpp"
#include "kserver/generators.hpp"
#include "kserver/wfa.hpp"

using namespace kserver;
using testing::cfg;

TEST_SUITE("wfa") {
  TEST_CASE("every step is a work-function minimiser") {
    Rng rng(51);
    for (int trial = 0; trial < 10; ++trial) {
      const SpacePtr s = random_general_metric(5, 4, rng);
      const auto d = oracle::distances(*s);
      const int k = 2 + trial % 2;
      const auto cs = ConfigSpace::create(s, k);
      std::vector<PointId> requests;
      for (int i = 0; i < 6; ++i) requests.push_back(random_point(*s, rng));
      const Configuration c0 = random_configuration(*cs, rng);
      const Trajectory t = run_wfa(cs, c0, requests, TieBreak::lexicographic());
      REQUIRE(t.configurations.size() == requests.size() + 1);
      REQUIRE(t.work_functions.size() == requests.size() + 1);
      CHECK(t.configurations[0] == c0);
      for (std::size_t i = 0; i < requests.size(); ++i) {
        const Configuration& prev = t.configurations[i];
        const Configuration& next = t.configurations[i + 1];
        CHECK(next.contains(requests[i]));
        const auto choices = oracle::wfa_choices(d, testing::table_of(t.work_functions[i + 1]),
                                                 oracle::Multiset(prev.begin(), prev.end()), requests[i]);
        const oracle::Multiset got(next.begin(), next.end());
        CHECK(std::find(choices.begin(), choices.end(), got) != choices.end());
        CHECK(got == choices.front());
        CHECK(t.costs[i] == matching_distance(prev, next, *s));
      }
      CHECK(t.final == t.work_functions.back());
    }
  }

  TEST_CASE("lexicographic tie on a line") {
    const SpacePtr line = build_line(5, 1, 1);
    const auto cs = ConfigSpace::create(line, 2);
    const std::vector<PointId> r{line->point("2")};
    const Trajectory t = run_wfa(cs, cfg(*line, {"0", "4"}), r, TieBreak::lexicographic());
    CHECK(t.configurations[1] == cfg(*line, {"0", "2"}));
    CHECK(t.costs[0] == 2);
  }

  TEST_CASE("preferred server tie-break") {
    const SpacePtr line = build_line(5, 1, 1);
    const auto cs = ConfigSpace::create(line, 2);
    const std::vector<PointId> r{line->point("2")};
    const Trajectory t = run_wfa(cs, cfg(*line, {"0", "4"}), r, TieBreak::prefer_server(line->point("4")));
    CHECK(t.configurations[1] == cfg(*line, {"2", "0"}));
    CHECK(t.tracked_server.back() == line->point("2"));
  }

  TEST_CASE("offline optimum") {
    const SpacePtr line = build_line(5, 1, 1);
    const auto cs = ConfigSpace::create(line, 1);
    const std::vector<PointId> r{line->point("4"), line->point("0"), line->point("4")};
    const Trajectory t = run_wfa(cs, cfg(*line, {"0"}), r, TieBreak::lexicographic());
    CHECK(offline_opt(t.final) == 12);
    CHECK(offline_opt(WorkFunction::cone(cs, Configuration{3})) == 0);
  }

  TEST_CASE("cost ledger") {
    Rng rng(52);
    const SpacePtr c = build_circle(8, 8, 1);
    const auto cs = ConfigSpace::create(c, 3);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<PointId> requests;
      for (int i = 0; i < 8; ++i) requests.push_back(random_point(*c, rng));
      const Configuration c0 = random_configuration(*cs, rng);
      const Trajectory t = run_wfa(cs, c0, requests, TieBreak::first_found());
      const LedgerReport ledger = extended_cost_ledger(t);
      CHECK(ledger.pinned_identity);
      CHECK(ledger.total_pinned == t.total_cost() + t.final(t.configurations.back()));
      CHECK(ledger.wfa_cost == t.total_cost());
      CHECK(ledger.opt == t.final.min_value());
      CHECK(ledger.cumulative.back() == ledger.total_extended);
      Value running = 0;
      for (std::size_t i = 0; i < requests.size(); ++i) {
        const auto before = testing::table_of(t.work_functions[i]);
        const auto after = testing::table_of(t.work_functions[i + 1]);
        CHECK(ledger.extended[i] == oracle::extended_cost(before, after));
        running += ledger.extended[i];
      }
      CHECK(running == ledger.total_extended);
      CHECK(ledger.total_extended + ledger.slack_needed >= ledger.wfa_cost + ledger.opt);
    }
  }

  TEST_CASE("competitive ratio on small instances") {
    const std::vector<Value> rays{2, 2, 2};
    const SpacePtr m = build_multiray(rays, 1, 1);
    const auto cs = ConfigSpace::create(m, 2);
    std::vector<Configuration> starts;
    for (std::size_t i = 0; i < cs->size(); ++i) starts.push_back(cs->at(i));
    AdversarySpec spec;
    spec.max_length = 3;
    const RatioReport report = ratio_report(cs, starts, spec);
    CHECK(report.complete);
    CHECK(report.violations == 0);
    CHECK(report.additive_allowance == 4 * m->diameter());
    CHECK(report.worst_excess <= report.additive_allowance);
    CHECK(report.sequences > 0);
  }

  TEST_CASE("tie-break parsing") {
    const SpacePtr c = testing::circle8();
    CHECK(parse_tie_break("lexicographic", *c).policy == TieBreak::Policy::lexicographic);
    CHECK(parse_tie_break("first", *c).policy == TieBreak::Policy::first_found);
    const TieBreak p = parse_tie_break("prefer:6", *c);
    CHECK(p.policy == TieBreak::Policy::prefer_server);
    CHECK(p.server == c->point("6"));
    CHECK(to_string(p, *c) == "prefer:6");
    CHECK_THROWS_AS(parse_tie_break("random", *c), Error);
    CHECK_THROWS_AS(parse_tie_break("prefer:nowhere", *c), Error);
  }
}

#include "doctest.h"
#include "helpers.hpp"
#include "kserver/enumerate.hpp"
#include "kserver/error.hpp"
#include "kserver/generators.hpp"
#include "kserver/io.hpp"
#include "kserver/replay.hpp"

using namespace kserver;
using testing::cfg;

namespace {

oracle::Table support_table(const WorkFunction& w) {
  const SupportSet s = support(w);
  oracle::Table out;
  for (std::size_t i = 0; i < s.members.size(); ++i) {
    const Configuration& c = w.configs().at(s.members[i]);
    out[oracle::Multiset(c.begin(), c.end())] = s.values[i];
  }
  return out;
}

const CounterexampleReport& replay() {
  static const CounterexampleReport r = replay_counterexample();
  return r;
}

}  // namespace

TEST_SUITE("taxi") {
  TEST_CASE("a taxi request with equal ends is a server request") {
    Rng rng(61);
    const SpacePtr c = testing::circle8();
    const auto cs = ConfigSpace::create(c, 3);
    for (int trial = 0; trial < 5; ++trial) {
      const WorkFunction w = random_reachable_taxi(cs, rng, 3, 2);
      const PointId s = random_point(*c, rng);
      const WorkFunction u = update(w, s);
      CHECK(std::ranges::equal(taxi_update_closed(w, s, s).values(), u.values()));
      CHECK(std::ranges::equal(taxi_update(w, s, s).values(), u.values()));
    }
  }

  TEST_CASE("closed form, exchange form and brute force agree") {
    Rng rng(62);
    for (const SpacePtr& c : {build_circle(8, 8, 1), build_circle(12, 12, 2)}) {
      const auto d = oracle::distances(*c);
      for (int k = 1; k <= 3; ++k) {
        const auto cs = ConfigSpace::create(c, k);
        for (int trial = 0; trial < 8; ++trial) {
          const WorkFunction w = random_reachable_taxi(cs, rng, 3);
          const PointId s = random_point(*c, rng);
          const PointId t = random_point(*c, rng);
          const WorkFunction closed = taxi_update_closed(w, s, t);
          CHECK(testing::table_of(closed) == oracle::taxi(d, testing::table_of(w), s, t, k));
          CHECK(std::ranges::equal(taxi_update(w, s, t).values(), closed.values()));
          const auto image = taxi_support_image(w, s, t);
          for (const auto& [x, v] : support_table(closed)) {
            const Configuration cx{std::span<const int>(x)};
            CHECK(std::find(image.begin(), image.end(), cx) != image.end());
          }
        }
      }
    }
  }

  TEST_CASE("dense simulation converges to the closed form") {
    Rng rng(63);
    const SpacePtr c = testing::circle8();
    const auto cs = ConfigSpace::create(c, 3);
    for (int trial = 0; trial < 4; ++trial) {
      const WorkFunction w = random_reachable_taxi(cs, rng, 3, 2);
      const TaxiRequest req{random_point(*c, rng), random_point(*c, rng), Orientation::clockwise};
      const WorkFunction closed = taxi_update_closed(w, req.start, req.dest);
      for (int m : {2, 4, 16}) {
        const SimulatedTaxi sim = taxi_update_simulated(w, req, m);
        CHECK(sim.m == m);
        const TaxiDeviation dev = taxi_deviation(closed, sim);
        CHECK(dev.within());
      }
    }
  }

  TEST_CASE("antipodal taxi requests follow the orientation") {
    const SpacePtr c = build_circle(8, 8, 1);
    const auto cs = ConfigSpace::create(c, 1);
    const WorkFunction w = WorkFunction::cone(cs, Configuration{2});
    const SimulatedTaxi cw = taxi_update_simulated(w, {0, 4, Orientation::clockwise}, 4);
    const SimulatedTaxi ccw = taxi_update_simulated(w, {0, 4, Orientation::counterclockwise}, 4);
    const WorkFunction closed = taxi_update_closed(w, 0, 4);
    CHECK(taxi_deviation(closed, cw).within());
    CHECK(taxi_deviation(closed, ccw).within());
    CHECK(closed(Configuration{4}) == 6);
  }

  TEST_CASE("canonical form is invariant under symmetries and shifts") {
    Rng rng(64);
    const SpacePtr c = build_circle(8, 8, 1);
    const auto cs = ConfigSpace::create(c, 3);
    const auto syms = circle_symmetries(8, 1);
    CHECK(syms.size() == 16);
    for (int trial = 0; trial < 5; ++trial) {
      const WorkFunction w = random_reachable(cs, rng, 4);
      const CanonicalWF base = canonicalize(w);
      for (const auto& perm : syms) CHECK(canonicalize(transform(w, perm)) == base);
      std::vector<Value> shifted(w.values().begin(), w.values().end());
      for (Value& v : shifted) v += 7;
      CHECK(canonicalize(WorkFunction(cs, shifted)) == base);
    }
    const WorkFunction a = WorkFunction::cone(cs, Configuration{0, 1, 2});
    const WorkFunction b = WorkFunction::cone(cs, Configuration{0, 1, 3});
    CHECK_FALSE(canonicalize(a) == canonicalize(b));
    CHECK(canonicalize(a) == canonicalize(WorkFunction::cone(cs, Configuration{3, 4, 5})));
  }

  TEST_CASE("server-only closure has no laziness violations") {
    EnumerationOptions o;
    o.taxi_alphabet = false;
    const EnumerationResult r = enumerate_reachable(o);
    CHECK(r.complete);
    CHECK(r.states == 155);
    CHECK(r.violations.empty());
  }

  TEST_CASE("seeded enumeration flags the non-lazy table") {
    EnumerationOptions o;
    o.extra_seeds.push_back(replay().stages[replay().stages.size() - 2].w);
    o.max_states = 2000;
    const EnumerationResult r = enumerate_reachable(o);
    CHECK_FALSE(r.complete);
    const std::string fp = fingerprint(replay().stages[replay().stages.size() - 2].w);
    const bool found = std::ranges::any_of(r.violations, [&](const Violation& v) { return v.fingerprint == fp; });
    CHECK(found);
    for (const Violation& v : r.violations) CHECK(v.potential_change < v.extended_cost);
  }

  TEST_CASE("enumeration budget") {
    EnumerationOptions o;
    o.max_states = 10;
    const EnumerationResult r = enumerate_reachable(o);
    CHECK_FALSE(r.complete);
    CHECK(r.states <= 11);
  }

  TEST_CASE("figure stages match the replay and brute force") {
    const nlohmann::json fig = read_json_file(testing::fixture("figure1.json"));
    const SpacePtr c = space_from_json(fig["space"]);
    const int k = fig["k"];
    const auto d = oracle::distances(*c);
    const Configuration start = parse_configuration(fig["start"], *c);
    oracle::Table table = oracle::cone(d, k, oracle::Multiset(start.begin(), start.end()));
    const auto& stages = replay().stages;
    REQUIRE(stages.size() == fig["stages"].size());
    for (std::size_t i = 0; i < stages.size(); ++i) {
      const auto& st = fig["stages"][i];
      CAPTURE(st["label"].get<std::string>());
      CHECK(stages[i].label == st["label"].get<std::string>());
      if (!st["event"].is_null()) {
        const RequestSeq ev = parse_sequence(st["event"].get<std::string>(), *c);
        REQUIRE(ev.size() == 1);
        if (const auto* r = std::get_if<ServerRequest>(&ev[0]))
          table = oracle::update(d, table, r->point);
        else {
          const auto& t = std::get<TaxiRequest>(ev[0]);
          table = oracle::taxi(d, table, t.start, t.dest, k);
        }
      }
      oracle::Table expected;
      for (const auto& e : st["support"]) {
        const Configuration x = parse_configuration(e["configuration"], *c);
        expected[oracle::Multiset(x.begin(), x.end())] = e["value"].get<Value>() * c->scale();
      }
      CHECK(support_table(stages[i].w) == expected);
      CHECK(oracle::support(d, table) == expected);
      CHECK(testing::table_of(stages[i].w) == table);
    }
  }

  TEST_CASE("replayed numbers") {
    const CounterexampleReport& r = replay();
    const MetricSpace& c = *r.space;
    CHECK(r.ok());
    CHECK(r.wfa_config == cfg(c, {"1", "5", "7"}));
    CHECK(r.single_server);
    CHECK(r.w_t_at_ct == 18);
    CHECK(r.w_t1_at_ct == 22);
    CHECK(r.pinned_increase == 4);
    CHECK(r.extended_cost == 4);
    CHECK(r.phi_t.value == 88);
    CHECK(r.phi_t1.value == 90);
    CHECK(r.bound_total == 90);
    CHECK(r.gap == -2);
  }

  TEST_CASE("events refine onto a finer circle") {
    const SpacePtr c = build_circle(8, 8, 1);
    const RequestSeq ev{TaxiRequest{1, 3, Orientation::clockwise}, ServerRequest{5}};
    const Refinement ref = refine_events(c, ev, 4);
    CHECK(ref.factor == 4);
    CHECK(ref.space->scale() == 4);
    CHECK(ref.event_end.size() == 2);
    CHECK(ref.requests.back() == ref.from_coarse[5]);
    CHECK(ref.requests[ref.event_end[0] - 1] == ref.from_coarse[3]);
    for (PointId a = 0; a < 8; ++a)
      for (PointId b = 0; b < 8; ++b) CHECK(ref.space->distance(ref.from_coarse[a], ref.from_coarse[b]) == 4 * c->distance(a, b));
  }
}

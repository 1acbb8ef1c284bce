// Acceptance run: one PASS/FAIL line per criterion. Every tolerance is exact
// unless a line states otherwise.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "helpers.hpp"
#include "kserver/enumerate.hpp"
#include "kserver/error.hpp"
#include "kserver/generators.hpp"
#include "kserver/io.hpp"
#include "kserver/potential.hpp"
#include "kserver/replay.hpp"
#include "kserver/report.hpp"
#include "kserver/suites.hpp"
#include "kserver/tree_metric.hpp"

using namespace kserver;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void expect(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [" << what << "]";
    }
  }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

SpacePtr fixture_space(const char* name) { return load_space(testing::fixture(name)); }

oracle::Table support_table(const WorkFunction& w) {
  const SupportSet s = support(w);
  oracle::Table out;
  for (std::size_t i = 0; i < s.members.size(); ++i) {
    const Configuration& c = w.configs().at(s.members[i]);
    out[oracle::Multiset(c.begin(), c.end())] = s.values[i];
  }
  return out;
}

const WorkFunction& replay_w_t(const CounterexampleReport& r) { return r.stages[r.stages.size() - 2].w; }

// 1. Counterexample replay, runtime under 1 s.
void replay_numbers(Outcome& o) {
  const auto t0 = Clock::now();
  const nlohmann::json r = run_command("counterexample", nlohmann::json::object());
  const double elapsed = seconds_since(t0);
  o.expect(r.at("status") == "ok", "status " + r.at("status").get<std::string>());
  o.expect(r.at("w_t_at_ct") == "9", "w_t(C_t)");
  o.expect(r.at("w_t1_at_ct") == "11", "w_t+1(C_t)");
  o.expect(r.at("pinned_increase") == "2", "difference");
  o.expect(r.at("phi_t") == "44", "Phi(w_t)");
  o.expect(r.at("phi_t_attained_at_456") == true, "achiever (4,5,6)");
  o.expect(r.at("bound_total") == "45", "bound assembly");
  o.expect(r.at("bound_line") == "[8+2]+[10+2]+[11+1]+[8+1+2] = 45", "bound line");
  const CounterexampleReport rep = replay_counterexample();
  const Value gap = laziness_gap(replay_w_t(rep), rep.space->point("4"));
  o.expect(gap <= -rep.space->scale(), "laziness gap");
  o.expect(elapsed < 1.0, "runtime");
  o.detail << " w_t(C_t)=" << r.at("w_t_at_ct").get<std::string>() << " w_t+1(C_t)="
           << r.at("w_t1_at_ct").get<std::string>() << " Phi=" << r.at("phi_t").get<std::string>()
           << " bound=" << r.at("bound_total").get<std::string>() << " gap=" << format_scaled(gap, rep.space->scale())
           << " time=" << elapsed << "s (limit 1s)";
}

// 2. Figure stages against the fixture and the brute-force chain.
void figure_stages(Outcome& o) {
  const nlohmann::json fig = read_json_file(testing::fixture("figure1.json"));
  const SpacePtr c = space_from_json(fig.at("space"));
  const int k = fig.at("k");
  const auto d = oracle::distances(*c);
  const Configuration start = parse_configuration(fig.at("start"), *c);
  oracle::Table table = oracle::cone(d, k, oracle::Multiset(start.begin(), start.end()));
  const CounterexampleReport rep = replay_counterexample();
  o.expect(rep.stages.size() == fig.at("stages").size(), "stage count");
  std::size_t matched = 0;
  for (std::size_t i = 0; i < rep.stages.size() && i < fig.at("stages").size(); ++i) {
    const auto& st = fig.at("stages")[i];
    const std::string label = st.at("label");
    if (!st.at("event").is_null()) {
      const RequestSeq ev = parse_sequence(st.at("event").get<std::string>(), *c);
      if (const auto* r = std::get_if<ServerRequest>(&ev.at(0)))
        table = oracle::update(d, table, r->point);
      else {
        const auto& t = std::get<TaxiRequest>(ev.at(0));
        table = oracle::taxi(d, table, t.start, t.dest, k);
      }
    }
    oracle::Table expected;
    for (const auto& e : st.at("support")) {
      const Configuration x = parse_configuration(e.at("configuration"), *c);
      expected[oracle::Multiset(x.begin(), x.end())] = e.at("value").get<Value>() * c->scale();
    }
    const bool ok = support_table(rep.stages[i].w) == expected && oracle::support(d, table) == expected &&
                    testing::table_of(rep.stages[i].w) == table;
    o.expect(ok, "stage " + label);
    matched += ok;
  }
  o.detail << " " << matched << "/" << fig.at("stages").size() << " stages match";
}

// 3. Taxi closed form, support transform and dense simulation.
void taxi_lemma(Outcome& o) {
  const SpacePtr c = testing::circle8();
  const auto d = oracle::distances(*c);
  const auto cs = ConfigSpace::create(c, 3);
  Rng rng(301);
  std::size_t bad_support = 0, bad_values = 0, bad_sim = 0;
  Value worst_num = 0, worst_den = 1;  // worst deviation / allowance as a fraction
  for (int trial = 0; trial < 200; ++trial) {
    const WorkFunction w = random_reachable_taxi(cs, rng, 4, 1);
    const PointId s = random_point(*c, rng);
    const PointId t = random_point(*c, rng);
    const WorkFunction closed = taxi_update_closed(w, s, t);
    std::set<Configuration> image;
    for (const Configuration& x : taxi_support_image(w, s, t)) image.insert(x);
    std::set<Configuration> supp;
    const SupportSet sup = support(closed);
    for (std::size_t idx : sup.members) supp.insert(cs->at(idx));
    bad_support += supp != image;
    bad_values += testing::table_of(closed) != oracle::taxi(d, testing::table_of(w), s, t, 3);
    const Orientation orient = rng() % 2 ? Orientation::clockwise : Orientation::counterclockwise;
    for (int m : {4, 16, 64}) {
      const SimulatedTaxi sim = taxi_update_simulated(w, {s, t, orient}, m);
      Value dev = 0;
      for (std::size_t i = 0; i < cs->size(); ++i) dev = std::max(dev, std::abs(closed.at(i) * sim.factor - sim.values[i]));
      // dev / factor <= 2k d(s,t) / (m - 1)
      const Value lhs = dev * (m - 1);
      const Value rhs = 2 * 3 * c->distance(s, t) * sim.factor;
      bad_sim += lhs > rhs;
      if (rhs > 0 && lhs * worst_den > worst_num * rhs) worst_num = lhs, worst_den = rhs;
    }
  }
  o.expect(bad_support == 0, std::to_string(bad_support) + " support mismatches");
  o.expect(bad_values == 0, std::to_string(bad_values) + " value mismatches");
  o.expect(bad_sim == 0, std::to_string(bad_sim) + " simulations over 2k d(s,t)/(m-1)");
  o.detail << " 200 triples, m in {4,16,64}, worst deviation " << static_cast<double>(worst_num) / static_cast<double>(worst_den)
           << " of the bound";
}

struct SuiteRun {
  const char* space;
  int k;
};

std::size_t run_cases(Outcome& o, Suite suite, const SpacePtr& s, int k, std::size_t cases, std::uint64_t seed,
                      const std::string& where) {
  SuiteOptions opt;
  opt.space = s;
  opt.k = k;
  opt.cases = cases;
  opt.seed = seed;
  opt.max_requests = 8;
  const SuiteResult r = run_suite(suite, opt);
  o.expect(r.passed(), std::string(to_string(suite)) + " on " + where + ": " + r.first_witness.value_or(""));
  return r.cases;
}

// 4. Duality, quasiconvexity, Lipschitz.
void structural_suites(Outcome& o) {
  const std::vector<SuiteRun> runs{{"circle8_unit.json", 2}, {"circle8_unit.json", 3}, {"tree5.json", 2},
                                   {"tree5.json", 3},        {"multiray3.json", 2},    {"multiray3.json", 3}};
  for (Suite suite : {Suite::duality, Suite::quasiconvex, Suite::lipschitz}) {
    std::size_t total = 0;
    for (std::size_t i = 0; i < runs.size(); ++i)
      total += run_cases(o, suite, fixture_space(runs[i].space), runs[i].k, 1000 / runs.size() + 1, 400 + i,
                         std::string(runs[i].space) + " k=" + std::to_string(runs[i].k));
    o.expect(total >= 1000, "case count");
    o.detail << " " << to_string(suite) << ":" << total;
  }
}

// 5. Server and evader potentials agree after the shift.
void equivalence(Outcome& o) {
  Rng rng(501);
  const std::vector<std::pair<SpacePtr, int>> bases{{fixture_space("general4.json"), 2},
                                                    {fixture_space("circle8_unit.json"), 2},
                                                    {random_general_metric(3, 4, rng), 3},
                                                    {random_general_metric(4, 4, rng), 2}};
  std::size_t total = 0;
  for (std::size_t i = 0; i < bases.size(); ++i) {
    o.expect(antipodal_extension(bases[i].first)->size() <= 8, "base too large");
    total += run_cases(o, Suite::equivalence, bases[i].first, bases[i].second, 50, 500 + i, "base " + std::to_string(i));
  }
  o.expect(total == 200, "case count");
  o.detail << " " << total << " work functions, extended base n <= 8, copies k";
}

// 6. Last request attains the tuple minimum.
void theorem_xk_r(Outcome& o) {
  const std::vector<SuiteRun> runs{{"line9.json", 2},      {"line9.json", 3},      {"star4.json", 2},
                                   {"star4.json", 3},      {"multiray333.json", 2}, {"multiray333.json", 3},
                                   {"tree6.json", 3},      {"general5.json", 4},   {"general5.json", 3}};
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const std::string where = std::string(runs[i].space) + " k=" + std::to_string(runs[i].k);
    run_cases(o, Suite::theorem_xk_r, fixture_space(runs[i].space), runs[i].k, 500, 600 + i, where);
  }
  o.detail << " 500 cases on each of " << runs.size() << " space/k pairs";
}

// 7. Competitive ratio on every short sequence.
void ratio(Outcome& o) {
  for (const auto& [name, k] : std::vector<std::pair<const char*, int>>{{"multiray3.json", 2}, {"tree5.json", 3}}) {
    const SpacePtr s = fixture_space(name);
    const auto cs = ConfigSpace::create(s, k);
    std::vector<Configuration> starts;
    for (std::size_t i = 0; i < cs->size(); ++i) starts.push_back(cs->at(i));
    AdversarySpec spec;
    spec.max_length = 6;
    const RatioReport r = ratio_report(cs, starts, spec);
    o.expect(r.complete, std::string(name) + " incomplete");
    o.expect(r.violations == 0, std::string(name) + " violations");
    o.expect(r.additive_allowance == k * k * s->diameter(), "allowance");
    o.detail << " " << name << " k=" << k << ": " << r.sequences << " sequences, worst excess "
             << format_scaled(r.worst_excess, s->scale()) << " <= " << format_scaled(r.additive_allowance, s->scale());
  }
}

// 8. Lazy adversary identity and the three-server lazy form.
void lazy(Outcome& o) {
  const SpacePtr c = fixture_space("circle8_unit.json");
  const std::size_t perm = run_cases(o, Suite::perm_intuition, c, 3, 300, 801, "circle8 k=3");
  const std::size_t lazy = run_cases(o, Suite::lazy_k3, c, 3, 100, 802, "circle8 k=3");
  o.detail << " perm_intuition " << perm << ", lazy_k3 " << lazy;
}

// 9. Spanning-tree potential over every reachable work function.
void mst(Outcome& o) {
  Rng rng(901);
  const SpacePtr s = random_general_metric(4, 5, rng);
  const auto cs = ConfigSpace::create(s, 2);
  std::set<std::pair<std::vector<Value>, PointId>> seen;
  std::vector<WorkFunction> frontier;
  auto add = [&](const WorkFunction& w) {
    std::vector<Value> v(w.values().begin(), w.values().end());
    const Value lo = w.min_value();
    for (Value& x : v) x -= lo;
    const PointId r = w.last_request() ? *w.last_request() : -1;
    if (seen.insert({v, r}).second) frontier.push_back(WorkFunction(cs, v, w.last_request(), Origin::reachable));
  };
  for (PointId a = 0; a < 4; ++a)
    for (PointId b = a + 1; b < 4; ++b)
      for (PointId r = 0; r < 4; ++r) add(update(WorkFunction::cone(cs, Configuration{a, b}), r));
  std::size_t checked = 0, bad_value = 0, bad_leaf = 0;
  while (!frontier.empty()) {
    const WorkFunction w = frontier.back();
    frontier.pop_back();
    const MstReport m = mst_evader_potential(w);
    bad_value += m.value != evader_potential(w).value;
    bad_leaf += !m.last_request_is_leaf;
    ++checked;
    for (PointId r = 0; r < 4; ++r) add(update(w, r));
  }
  o.expect(bad_value == 0, std::to_string(bad_value) + " value mismatches");
  o.expect(bad_leaf == 0, std::to_string(bad_leaf) + " without a leaf tree");
  o.detail << " " << checked << " reachable work functions";
}

// 10. Tree reconstruction.
void trees(Outcome& o) {
  Rng rng(1001);
  std::size_t bad = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const SpacePtr s = random_leaf_metric(3 + trial % 8, 6, rng);
    const WeightedTree t = tree_from_quasiconcave(*s);
    for (PointId a = 0; a < s->size(); ++a)
      for (PointId b = 0; b < s->size(); ++b) bad += t.path_weight(a, b) != t.weight_scale * s->distance(a, b);
  }
  o.expect(bad == 0, std::to_string(bad) + " distance mismatches");
  const QuasiconcavityCheck quad = is_quasiconcave(*fixture_space("circle4.json"));
  o.expect(!quad.holds && quad.witness.has_value(), "circle quadruple accepted");
  o.detail << " 100 trees with 3..10 leaves; circle quadruple rejected";
}

// 11. Enumeration: smoke by default, the full census on request.
void census(Outcome& o) {
  const CounterexampleReport rep = replay_counterexample();
  const std::string fp = fingerprint(replay_w_t(rep));
  EnumerationOptions smoke;
  smoke.extra_seeds.push_back(replay_w_t(rep));
  smoke.max_states = 2000;
  const EnumerationResult s = enumerate_reachable(smoke);
  std::set<std::string> classes;
  for (const Violation& v : s.violations) classes.insert(v.fingerprint);
  o.expect(classes.count(fp) == 1, "replay state not flagged");
  o.expect(classes.size() == 1, std::to_string(classes.size()) + " violation classes in smoke run");
  EnumerationOptions server_only;
  server_only.taxi_alphabet = false;
  const EnumerationResult so = enumerate_reachable(server_only);
  o.expect(so.complete && so.violations.empty(), "server-only closure has violations");
  o.detail << " smoke: " << s.states << " states, replay flagged; server-only: " << so.states << " states, 0 violations";
  const char* full = std::getenv("KSERVER_FULL_CENSUS");
  if (full && std::string(full) == "1") {
    const auto t0 = Clock::now();
    const EnumerationResult r = enumerate_reachable(EnumerationOptions{});
    std::set<std::string> all;
    for (const Violation& v : r.violations) all.insert(v.fingerprint);
    o.expect(r.complete, "census incomplete");
    o.expect(r.states > 280000, "census too small");
    o.expect(all.size() == 1 && all.count(fp) == 1, "census violation classes");
    o.detail << "; census: " << r.states << " states, " << all.size() << " violation class, " << seconds_since(t0) << "s";
  } else {
    o.detail << "; full census skipped (set KSERVER_FULL_CENSUS=1)";
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, void (*)(Outcome&)>> criteria{
      {"counterexample replay", replay_numbers},
      {"figure stages", figure_stages},
      {"taxi lemma", taxi_lemma},
      {"duality, quasiconvexity, Lipschitz", structural_suites},
      {"server/evader equivalence", equivalence},
      {"last request attains the minimum", theorem_xk_r},
      {"competitive ratio", ratio},
      {"lazy adversary", lazy},
      {"spanning-tree potential", mst},
      {"tree reconstruction", trees},
      {"enumeration", census},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " exception: " << e.what();
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << " (" << criteria[i].first << ", "
              << seconds_since(t0) << "s):" << o.detail.str() << std::endl;
  }
  return failed == 0 ? 0 : 1;
}

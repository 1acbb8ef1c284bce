#include "doctest.h"
#include "helpers.hpp"
#include "kserver/error.hpp"
#include "kserver/io.hpp"
#include "kserver/report.hpp"
#include "kserver/suites.hpp"

using namespace kserver;
using nlohmann::json;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::invariant;
}

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("sequence parsing") {
    const SpacePtr c = testing::circle8();
    const RequestSeq seq = parse_sequence("# comment\n\nr 4\ntaxi 6.5 6\ntaxi 0 4 ccw  # antipodal\n", *c);
    REQUIRE(seq.size() == 3);
    CHECK(std::get<ServerRequest>(seq[0]).point == c->point("4"));
    const auto& t = std::get<TaxiRequest>(seq[1]);
    CHECK(t.start == c->point("6.5"));
    CHECK(t.dest == c->point("6"));
    CHECK(std::get<TaxiRequest>(seq[2]).orientation == Orientation::counterclockwise);
    CHECK(parse_sequence(format_sequence(seq, *c), *c).size() == 3);
    CHECK(format_sequence(parse_sequence(format_sequence(seq, *c), *c), *c) == format_sequence(seq, *c));
    const auto bad_point = [&] { parse_sequence("r 4\nr 9.25\n", *c); };
    CHECK(kind_of(bad_point) == ErrorKind::parse);
    CHECK(message_of(bad_point).find("line 2") != std::string::npos);
    const auto bad_word = [&] { parse_sequence("r 4\nr 3\nfly 2\n", *c); };
    CHECK(message_of(bad_word).find("line 3") != std::string::npos);
    CHECK(kind_of([&] { parse_sequence("taxi 1\n", *c); }) == ErrorKind::parse);
  }

  TEST_CASE("nonlazy sequence fixture") {
    const SpacePtr c = load_space(testing::fixture("circle8.json"));
    const RequestSeq seq = load_sequence(testing::fixture("nonlazy.seq"), *c);
    CHECK(seq.size() == 7);
    CHECK(std::get<ServerRequest>(seq.back()).point == c->point("4"));
  }

  TEST_CASE("space descriptions round-trip") {
    for (const char* name : {"circle8.json", "circle4.json", "multiray3.json", "line9.json", "star4.json", "star4c.json",
                             "tree5.json", "general5.json"}) {
      CAPTURE(name);
      const SpacePtr s = load_space(testing::fixture(name));
      const SpacePtr back = space_from_json(s->source());
      REQUIRE(back->size() == s->size());
      CHECK(back->scale() == s->scale());
      for (PointId a = 0; a < s->size(); ++a) {
        CHECK(back->label(a) == s->label(a));
        for (PointId b = 0; b < s->size(); ++b) CHECK(back->distance(a, b) == s->distance(a, b));
      }
    }
    const json ext = {{"kind", "copies"}, {"copies", 2}, {"base", {{"kind", "extended"}, {"base", read_json_file(testing::fixture("tree5.json"))}}}};
    const SpacePtr e = space_from_json(ext);
    CHECK(e->size() == 20);
    CHECK(space_from_json(e->source())->size() == 20);
    CHECK(kind_of([] { space_from_json(json{{"kind", "torus"}}); }) == ErrorKind::parse);
  }

  TEST_CASE("suites by name") {
    for (Suite s : all_suites()) CHECK(parse_suite(to_string(s)) == s);
    CHECK(kind_of([] { parse_suite("nonsense"); }) == ErrorKind::invalid_input);
    CHECK(message_of([] { parse_suite("nonsense"); }).find("duality") != std::string::npos);
    SuiteOptions o;
    o.space = load_space(testing::fixture("tree5.json"));
    o.k = 2;
    CHECK(kind_of([&] { run_suite(Suite::push3, o); }) == ErrorKind::invalid_input);
    o.cases = 20;
    const SuiteResult r = run_suite(Suite::theorem_xk_r, o);
    CHECK(r.passed());
    CHECK(r.cases == 20);
  }

  TEST_CASE("failing tables are reported with a witness") {
    const SpacePtr c = build_circle(4, 4, 1);
    const auto cs = ConfigSpace::create(c, 2);
    std::vector<Value> v(cs->size(), 2);
    v[cs->index_of(Configuration{0, 0})] = 0;
    v[cs->index_of(Configuration{2, 2})] = 0;
    const SuiteResult r = check_table(Suite::quasiconvex, WorkFunction(cs, v));
    CHECK_FALSE(r.passed());
    CHECK(r.first_witness);
    REQUIRE(r.witness_table);
    CHECK(work_function_from_json(*r.witness_table) == WorkFunction(cs, v));
  }

  TEST_CASE("reports re-run to the same result") {
    const json sim = {{"space", read_json_file(testing::fixture("circle8.json"))},
                      {"k", 3},
                      {"start", {"1", "6", "7"}},
                      {"events", read_text_file(testing::fixture("nonlazy.seq"))},
                      {"tie", "prefer:6"}};
    const json report = make_report("simulate", sim);
    CHECK(report["command"] == "simulate");
    CHECK(report["result"]["status"] == "ok");
    CHECK(check_report(report).empty());
    json tampered = report;
    tampered["result"]["total_cost"] = "999";
    CHECK_FALSE(check_report(tampered).empty());
    CHECK(exit_code(report["result"]) == 0);
    CHECK_FALSE(render_text(report).empty());

    const json ver = {{"space", read_json_file(testing::fixture("tree5.json"))}, {"k", 2}, {"suite", "duality"}, {"cases", 10}};
    CHECK(check_report(make_report("verify", ver)).empty());
  }

  TEST_CASE("counterexample command") {
    const json ok = run_command("counterexample", json::object());
    CHECK(ok["status"] == "ok");
    CHECK(ok["bound_line"] == "[8+2]+[10+2]+[11+1]+[8+1+2] = 45");
    CHECK(exit_code(ok) == 0);
    const json lex = run_command("counterexample", {{"tie", "lexicographic"}});
    CHECK(lex["status"] == "failed");
    CHECK(exit_code(lex) == 3);
    CHECK(kind_of([] { run_command("counterexample", {{"scale", 1}}); }) == ErrorKind::invalid_input);
    CHECK(kind_of([] { run_command("frobnicate", json::object()); }) == ErrorKind::invalid_input);
  }

  TEST_CASE("budget-limited enumeration is partial") {
    const json r = run_command("enumerate", {{"max_states", 5}});
    CHECK(r["status"] == "partial");
    CHECK(exit_code(r) == 4);
  }

  TEST_CASE("tree reconstruction command") {
    const json good = run_command("reconstruct-tree", {{"space", read_json_file(testing::fixture("tree5.json"))}});
    CHECK(good["status"] == "ok");
    CHECK(good["round_trip"] == true);
    const json bad = run_command("reconstruct-tree", {{"space", read_json_file(testing::fixture("circle4.json"))}});
    CHECK(bad["status"] == "failed");
    CHECK(bad["witness"]["points"].size() == 4);
  }
}

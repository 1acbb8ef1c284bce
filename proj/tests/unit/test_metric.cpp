#include <array>

#include "doctest.h"
#include "helpers.hpp"
#include "kserver/error.hpp"
#include "kserver/generators.hpp"
#include "kserver/tree_metric.hpp"

using namespace kserver;
using testing::cfg;

namespace {

// Independent four-point scan: the largest pair-sum must appear twice.
bool quasiconcave_scan(const MetricSpace& s) {
  const int n = s.size();
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c)
        for (int d = c + 1; d < n; ++d) {
          std::array<Value, 3> sums{s.distance(a, b) + s.distance(c, d), s.distance(a, c) + s.distance(b, d),
                                    s.distance(a, d) + s.distance(b, c)};
          std::sort(sums.begin(), sums.end());
          if (sums[2] != sums[1]) return false;
        }
  return true;
}

}  // namespace

TEST_SUITE("metric") {
  TEST_CASE("circle of circumference 8 at scale 2") {
    const SpacePtr s = testing::circle8();
    CHECK(s->size() == 16);
    CHECK(s->distance(s->point("6.5"), s->point("6")) == 1);
    CHECK(s->distance(s->point("1"), s->point("7")) == 4);
    CHECK(s->antipode(s->point("2")) == s->point("6"));
    CHECK(s->distance(s->point("2"), s->point("6")) == s->diameter());
    CHECK(s->diameter() == 8);
  }

  TEST_CASE("odd circles have no antipodes") {
    CHECK_FALSE(build_circle(5, 5, 1)->has_antipodes());
    CHECK(build_circle(6, 6, 1)->has_antipodes());
  }

  TEST_CASE("inexact circle spacing is rejected with a scale hint") {
    try {
      build_circle(16, 8, 1);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::invalid_input);
      CHECK(std::string(e.what()).find("scale") != std::string::npos);
    }
  }

  TEST_CASE("tree distances") {
    const std::vector<WeightedEdge> path{{0, 1, 1}, {1, 2, 1}};
    const SpacePtr p = build_tree(3, path, 1);
    CHECK(p->distance(0, 2) == 2);
    const std::vector<WeightedEdge> star{{0, 1, 2}, {0, 2, 3}};
    CHECK(build_tree(3, star, 1)->distance(1, 2) == 5);
    const std::vector<WeightedEdge> single{{0, 1, 7}};
    CHECK(build_tree(2, single, 1)->diameter() == 7);
    const std::vector<WeightedEdge> cycle{{0, 1, 1}, {1, 2, 1}, {2, 0, 1}};
    CHECK_THROWS_AS(build_tree(3, cycle, 1), Error);
    const std::vector<WeightedEdge> split{{0, 1, 1}, {2, 3, 1}};
    CHECK_THROWS_AS(build_tree(4, split, 1), Error);
  }

  TEST_CASE("two rays of length 4 form a line of 9 points") {
    const std::vector<Value> rays{4, 4};
    const SpacePtr m = build_multiray(rays, 1, 1);
    const SpacePtr line = build_line(9, 1, 1);
    REQUIRE(m->size() == 9);
    auto pos = [&](const std::string& label) {
      if (label == "c") return 0;
      const int j = std::stoi(label.substr(1));
      return label[0] == 'a' ? -j : j;
    };
    for (int a = 0; a < 9; ++a)
      for (int b = 0; b < 9; ++b) CHECK(m->distance(a, b) == std::abs(pos(m->label(a)) - pos(m->label(b))));
    for (int a = 0; a < 9; ++a)
      for (int b = 0; b < 9; ++b)
        CHECK(line->distance(a, b) == std::abs(std::stoi(line->label(a)) - std::stoi(line->label(b))));
  }

  TEST_CASE("multiray shapes") {
    const std::vector<Value> three{1, 1, 1};
    const SpacePtr star = build_multiray(three, 1, 1);
    CHECK(star->size() == 4);
    CHECK(star->diameter() == 2);
    const std::vector<Value> uneven{2, 3};
    const SpacePtr m = build_multiray(uneven, 1, 1);
    CHECK(m->distance(m->point("a2"), m->point("b3")) == 5);
    const std::vector<Value> inexact{2, 3};
    CHECK_THROWS_AS(build_multiray(inexact, 2, 1), Error);
  }

  TEST_CASE("weighted star") {
    const std::vector<Value> w{1, 2, 3, 4};
    const SpacePtr leaves = build_star(w, 1, false);
    CHECK(leaves->size() == 4);
    CHECK(leaves->distance(leaves->point("l0"), leaves->point("l3")) == 5);
    const SpacePtr centered = build_star(w, 1, true);
    CHECK(centered->distance(centered->point("c"), centered->point("l2")) == 3);
  }

  TEST_CASE("antipodal extension") {
    const SpacePtr two = build_general({"a", "b"}, {0, 3, 3, 0}, 1);
    CHECK(antipodal_extension(two) == two);
    const SpacePtr three = build_general({"a", "b", "c"}, {0, 2, 3, 2, 0, 2, 3, 2, 0}, 1);
    const SpacePtr e = antipodal_extension(three);
    CHECK(e->size() == 6);
    CHECK(e->diameter() == 6);
    const PointId a = e->point("a"), b = e->point("b"), abar = e->point("a'"), bbar = e->point("b'");
    CHECK(e->antipode(a) == abar);
    CHECK(e->distance(a, abar) == 6);
    CHECK(e->distance(abar, bbar) == 2);
    CHECK(e->distance(abar, b) == 4);
    CHECK(e->original_points().size() == 3);
  }

  TEST_CASE("antipodal extension is the identity on even circles") {
    const SpacePtr c = testing::circle8();
    CHECK(antipodal_extension(c) == c);
  }

  TEST_CASE("antipodal extension of a unit triangle") {
    const SpacePtr t = build_general({"x", "y", "z"}, {0, 1, 1, 1, 0, 1, 1, 1, 0}, 1);
    const SpacePtr e = antipodal_extension(t);
    CHECK(e->distance(e->point("x"), e->point("y'")) == 1);
    CHECK(e->distance(e->point("x"), e->point("x'")) == 2);
  }

  TEST_CASE("antipode identity holds on extensions of random metrics") {
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
      const SpacePtr base = random_general_metric(5, 6, rng);
      const SpacePtr e = antipodal_extension(base);
      CHECK(e->diameter() == 2 * base->diameter());
      for (PointId p = 0; p < e->size(); ++p)
        for (PointId x = 0; x < e->size(); ++x)
          CHECK(e->distance(p, x) + e->distance(x, e->antipode(p)) == e->diameter());
    }
  }

  TEST_CASE("matching distance") {
    const SpacePtr c = testing::circle8();
    CHECK(matching_distance(cfg(*c, {"1", "6", "7"}), cfg(*c, {"1", "6", "7"}), *c) == 0);
    CHECK(matching_distance(cfg(*c, {"1", "6", "7"}), cfg(*c, {"1", "5", "7"}), *c) == 2);
    const SpacePtr line = build_line(11, 1, 1);
    CHECK(matching_distance(cfg(*line, {"0", "0"}), cfg(*line, {"0", "10"}), *line) == 10);
  }

  TEST_CASE("matching distance agrees with brute force and between algorithms") {
    Rng rng(3);
    const SpacePtr s = random_general_metric(7, 9, rng);
    const auto d = oracle::distances(*s);
    for (int k = 1; k <= 6; ++k) {
      const auto configs = ConfigSpace::create(s, k);
      for (int trial = 0; trial < 30; ++trial) {
        const Configuration x = random_configuration(*configs, rng);
        const Configuration y = random_configuration(*configs, rng);
        const Value expected = oracle::matching(d, {x.begin(), x.end()}, {y.begin(), y.end()});
        CHECK(matching_distance(x, y, *s) == expected);
        if (k <= 5) CHECK(matching_distance_enumerated(x, y, *s) == expected);
        CHECK(matching_distance_assignment(x, y, *s) == expected);
      }
    }
  }

  TEST_CASE("matching distance is a metric on configurations") {
    Rng rng(5);
    const SpacePtr s = random_general_metric(6, 5, rng);
    const auto configs = ConfigSpace::create(s, 3);
    for (int trial = 0; trial < 200; ++trial) {
      const Configuration x = random_configuration(*configs, rng);
      const Configuration y = random_configuration(*configs, rng);
      const Configuration z = random_configuration(*configs, rng);
      CHECK(matching_distance(x, y, *s) <= matching_distance(x, z, *s) + matching_distance(z, y, *s));
    }
  }

  TEST_CASE("pairwise sums") {
    const SpacePtr c = testing::circle8();
    CHECK(pairwise_sum(cfg(*c, {"3"}), *c) == 0);
    CHECK(pairwise_sum(cfg(*c, {"1", "1", "3"}), *c) == 2 * c->distance(c->point("1"), c->point("3")));
    CHECK(pairwise_sum(cfg(*c, {"4", "5", "6"}), *c) == 8);
  }

  TEST_CASE("quasiconcavity") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
      const SpacePtr t = random_tree_space(7, 5, rng);
      CHECK(is_quasiconcave(*t).holds);
      CHECK(quasiconcave_scan(*t));
    }
    const SpacePtr c = build_circle(8, 8, 1);
    const std::vector<PointId> quad{0, 2, 4, 6};
    const QuasiconcavityCheck q = is_quasiconcave(*restrict_to(c, quad));
    REQUIRE_FALSE(q.holds);
    REQUIRE(q.witness);
    std::array<PointId, 4> pts = q.witness->points;
    std::sort(pts.begin(), pts.end());
    CHECK(pts == std::array<PointId, 4>{0, 1, 2, 3});
    const SpacePtr tri = build_general({"x", "y", "z"}, {0, 3, 4, 3, 0, 5, 4, 5, 0}, 1);
    CHECK(is_quasiconcave(*tri).holds);
    for (int trial = 0; trial < 20; ++trial) {
      const SpacePtr g = random_general_metric(6, 4, rng);
      CHECK(is_quasiconcave(*g).holds == quasiconcave_scan(*g));
    }
  }

  TEST_CASE("tree reconstruction from small metrics") {
    const SpacePtr two = build_general({"x", "y"}, {0, 5, 5, 0}, 1);
    const WeightedTree t2 = tree_from_quasiconcave(*two);
    REQUIRE(t2.edges.size() == 1);
    CHECK(t2.edges[0].weight == 5 * t2.weight_scale);
    const SpacePtr tri = build_general({"x", "y", "z"}, {0, 3, 4, 3, 0, 5, 4, 5, 0}, 1);
    const WeightedTree t3 = tree_from_quasiconcave(*tri);
    std::vector<Value> leaf_edges;
    for (const auto& e : t3.edges) leaf_edges.push_back(e.weight);
    std::sort(leaf_edges.begin(), leaf_edges.end());
    CHECK(leaf_edges == std::vector<Value>{1 * t3.weight_scale, 2 * t3.weight_scale, 3 * t3.weight_scale});
    CHECK(t3.path_weight(0, 1) == 3 * t3.weight_scale);
    const std::vector<PointId> quad{0, 2, 4, 6};
    CHECK_THROWS_AS(tree_from_quasiconcave(*restrict_to(build_circle(8, 8, 1), quad)), Error);
  }

  TEST_CASE("tree reconstruction round-trips random leaf metrics") {
    Rng rng(13);
    for (int trial = 0; trial < 20; ++trial) {
      const SpacePtr leaves = random_leaf_metric(8, 6, rng);
      const WeightedTree t = tree_from_quasiconcave(*leaves);
      for (const auto& e : t.edges) CHECK(e.weight >= 0);
      for (PointId a = 0; a < leaves->size(); ++a)
        for (PointId b = 0; b < leaves->size(); ++b)
          CHECK(t.path_weight(a, b) == leaves->distance(a, b) * t.weight_scale);
    }
  }

  TEST_CASE("scaled lengths") {
    CHECK(parse_scaled("6.5", 2) == 13);
    CHECK(parse_scaled("13/2", 2) == 13);
    CHECK(parse_scaled("-2", 2) == -4);
    CHECK_THROWS_AS(parse_scaled("0.25", 2), Error);
    CHECK(format_scaled(13, 2) == "6.5");
    CHECK(format_scaled(7, 3) == "7/3");
  }

  TEST_CASE("copies and subsets") {
    const SpacePtr c = build_circle(4, 4, 1);
    const SpacePtr copies = with_copies(c, 2);
    CHECK(copies->size() == 8);
    CHECK(copies->pseudo());
    CHECK(copies->distance(copies->point("1"), copies->point("1#1")) == 0);
    CHECK(copies->distance(copies->point("0"), copies->point("2#1")) == 2);
    const std::vector<PointId> pts{3, 1};
    const SpacePtr sub = restrict_to(c, pts);
    CHECK(sub->label(0) == "3");
    CHECK(sub->distance(0, 1) == 2);
  }

  TEST_CASE("metrics violating the triangle inequality are rejected") {
    CHECK_THROWS_AS(build_general({"x", "y", "z"}, {0, 1, 5, 1, 0, 1, 5, 1, 0}, 1), Error);
    CHECK_THROWS_AS(build_general({"x", "y"}, {0, 1, 2, 0}, 1), Error);
  }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>

#include "agm/agm.hpp"
#include "oracle.hpp"

using namespace agm;

namespace {

Vertex vx(const FieldCtx& f, int a, int b) { return make_vertex(f, f.from_int(a), f.from_int(b)); }

std::vector<Vertex> vxs(const FieldCtx& f, std::initializer_list<std::pair<int, int>> list) {
  std::vector<Vertex> out;
  for (auto [a, b] : list) out.push_back(vx(f, a, b));
  return out;
}

std::vector<Vertex> to_vec(const Neighbors& n) { return {n.begin(), n.end()}; }

}  // namespace

TEST_CASE("vertex validation") {
  const auto f11 = FieldCtx::create(11, 1);
  CHECK(is_vertex(f11, f11.from_int(4), f11.from_int(1)));
  CHECK(vertex_rejection(f11, f11.from_int(3), f11.from_int(3)) == VertexRejection::equal_coordinates);
  CHECK(vertex_rejection(f11, f11.from_int(3), f11.from_int(8)) == VertexRejection::opposite_coordinates);
  CHECK(vertex_rejection(f11, f11.zero(), f11.one()) == VertexRejection::zero_coordinate);
  const auto f13 = FieldCtx::create(13, 1);
  CHECK(vertex_rejection(f13, f13.from_int(1), f13.from_int(2)) == VertexRejection::nonsquare_product);
  CHECK_THROWS_AS(vx(f13, 1, 2), VertexError);
  try {
    vx(f13, 5, 5);
  } catch (const VertexError& e) {
    CHECK(e.reason() == VertexRejection::equal_coordinates);
  }
  CHECK(format_vertex(f11, vx(f11, 4, 1)) == "(4,1)");
  const auto f27 = FieldCtx::from_order(27);
  const Vertex v{f27.parse("1,1,0"), f27.parse("1,0,0")};
  CHECK(format_vertex(f27, v) == "((1,1,0),(1,0,0))");
}

TEST_CASE("children examples") {
  const auto f11 = FieldCtx::create(11, 1);
  CHECK(to_vec(children(f11, vx(f11, 4, 1))) == vxs(f11, {{8, 2}}));
  const auto f29 = FieldCtx::create(29, 1);
  CHECK(to_vec(children(f29, vx(f29, 9, 6))) == vxs(f29, {{22, 5}, {22, 24}}));
  const auto f13 = FieldCtx::create(13, 1);
  CHECK(children(f13, vx(f13, 1, 3)).empty());
}

TEST_CASE("parents examples") {
  const auto f11 = FieldCtx::create(11, 1);
  CHECK(to_vec(parents(f11, vx(f11, 8, 2))) == vxs(f11, {{1, 4}, {4, 1}}));
  const auto f13 = FieldCtx::create(13, 1);
  CHECK(parents(f13, vx(f13, 1, 3)).empty());
}

TEST_CASE("children and parents agree with the brute-force graph") {
  for (int p : {7, 11, 13, 19, 23, 29, 37, 43, 53, 61}) {
    CAPTURE(p);
    const auto f = FieldCtx::create(p, 1);
    const oracle::Graph g = oracle::build(p);
    for (const auto& [a, b] : g.vertices) {
      const Vertex v = vx(f, a, b);
      std::vector<Vertex> kids, pars;
      for (auto [c, d] : g.children.at({a, b})) kids.push_back(vx(f, c, d));
      for (auto [c, d] : g.parents.at({a, b})) pars.push_back(vx(f, c, d));
      std::sort(kids.begin(), kids.end(), [](const Vertex& x, const Vertex& y) { return x.b < y.b; });
      std::sort(pars.begin(), pars.end());
      REQUIRE(to_vec(children(f, v)) == kids);
      REQUIRE(to_vec(parents(f, v)) == pars);
    }
  }
}

TEST_CASE("parent and child relations are dual in extension fields") {
  for (std::uint64_t q : {27, 125, 49}) {
    const auto f = FieldCtx::from_order(q);
    for (std::uint32_t i = 1; i < q; ++i)
      for (std::uint32_t j = 1; j < q; ++j) {
        if (!is_vertex(f, f.element(i), f.element(j))) continue;
        const Vertex v{f.element(i), f.element(j)};
        for (const Vertex& c : children(f, v)) REQUIRE(parents(f, c).contains(v));
        for (const Vertex& u : parents(f, v)) REQUIRE(children(f, u).contains(v));
      }
  }
}

TEST_CASE("automorphisms and square vertices") {
  const auto f11 = FieldCtx::create(11, 1);
  const Vertex v = vx(f11, 4, 1);
  for (int a = 1; a < 11; ++a) {
    const FieldElement alpha = f11.from_int(a);
    CHECK(to_vec(children(f11, scale(f11, alpha, v))) ==
          std::vector<Vertex>{scale(f11, alpha, vx(f11, 8, 2))});
  }
  CHECK(scale(f11, f11.from_int(2), v) == vx(f11, 8, 2));
  CHECK(scale(f11, f11.one(), v) == v);
  CHECK_THROWS_AS(scale(f11, f11.zero(), v), FieldError);
  CHECK(is_square_vertex(f11, v));
  CHECK(!is_square_vertex(f11, vx(f11, 8, 2)));
  const auto f29 = FieldCtx::create(29, 1);
  CHECK(is_square_vertex(f29, vx(f29, 9, 6)));
}

TEST_CASE("two-step square lemma, exhaustive for q <= 61") {
  for (std::uint64_t q : {7, 11, 13, 19, 23, 27, 29, 31, 37, 43, 47, 53, 59, 61}) {
    const auto f = FieldCtx::from_order(q);
    for (std::uint32_t i = 1; i < q; ++i)
      for (std::uint32_t j = 1; j < q; ++j) {
        if (!is_vertex(f, f.element(i), f.element(j))) continue;
        const Vertex u{f.element(i), f.element(j)};
        for (const Vertex& m : children(f, u))
          for (const Vertex& w : children(f, m)) REQUIRE(is_square_vertex(f, u) == is_square_vertex(f, w));
      }
  }
}

TEST_CASE("AGM step for q = 3 mod 4") {
  const auto f11 = FieldCtx::create(11, 1);
  CHECK(agm_step_3mod4(f11, vx(f11, 4, 1)) == vx(f11, 8, 2));
  CHECK(agm_step_3mod4(f11, vx(f11, 9, 1)) == vx(f11, 5, 3));
  CHECK(agm_step_3mod4(f11, vx(f11, 3, 4)) == vx(f11, 9, 1));
  for (int p : {7, 11, 19, 23, 31}) {
    const auto f = FieldCtx::create(p, 1);
    const oracle::Graph g = oracle::build(p);
    for (const auto& [a, b] : g.vertices) {
      const auto& kids = g.children.at({a, b});
      REQUIRE(kids.size() == 1);
      REQUIRE(agm_step_3mod4(f, vx(f, a, b)) == vx(f, kids[0].first, kids[0].second));
    }
  }
  CHECK_THROWS_AS(agm_step_3mod4(FieldCtx::create(29, 1), vx(FieldCtx::create(29, 1), 9, 6)), SequenceError);
}

TEST_CASE("AGM step for q = 5 mod 8") {
  const auto f29 = FieldCtx::create(29, 1);
  const Vertex s = agm_step_5mod8(f29, vx(f29, 9, 6));
  const auto kids = children(f29, vx(f29, 9, 6));
  CHECK(kids.contains(s));
  std::size_t with_children = 0;
  for (const Vertex& c : kids) with_children += !children(f29, c).empty();
  CHECK(with_children == 1);
  CHECK(!children(f29, s).empty());

  const auto f13 = FieldCtx::create(13, 1);
  try {
    agm_step_5mod8(f13, vx(f13, 1, 3));
    FAIL("expected an error");
  } catch (const SequenceError& e) {
    CHECK(e.failure() == SequenceFailure::childless_start);
  }
}

TEST_CASE("AGM sequences over F_11 reproduce the known periods") {
  const auto f = FieldCtx::create(11, 1);
  const auto ten = vxs(f, {{4, 1}, {8, 2}, {5, 4}, {10, 8}, {9, 5}, {7, 10}, {3, 9}, {6, 7}, {1, 3}, {2, 6}});
  auto s = agm_sequence(f, vx(f, 4, 1));
  CHECK(s.preperiod.empty());
  CHECK(s.period == ten);

  s = agm_sequence(f, vx(f, 1, 4));
  CHECK(s.preperiod == vxs(f, {{1, 4}}));
  CHECK(s.period == vxs(f, {{8, 2}, {5, 4}, {10, 8}, {9, 5}, {7, 10}, {3, 9}, {6, 7}, {1, 3}, {2, 6}, {4, 1}}));

  s = agm_sequence(f, vx(f, 9, 1));
  CHECK(s.preperiod.empty());
  CHECK(s.period == vxs(f, {{9, 1}, {5, 3}, {4, 9}, {1, 5}, {3, 4}}));

  s = agm_sequence(f, vx(f, 1, 9));
  CHECK(s.preperiod == vxs(f, {{1, 9}}));
  CHECK(s.period == vxs(f, {{5, 3}, {4, 9}, {1, 5}, {3, 4}, {9, 1}}));
}

TEST_CASE("AGM sequence over F_29 from a listed cycle vertex") {
  const auto f = FieldCtx::create(29, 1);
  const auto s = agm_sequence(f, vx(f, 9, 6));
  CHECK(s.preperiod.empty());
  CHECK(s.period.size() == 7);
  CHECK(s.period.front() == vx(f, 9, 6));
}

TEST_CASE("sequences: consecutive terms are edges and preperiods are short") {
  for (std::uint64_t q : {7, 11, 19, 27, 29, 37, 53, 61, 125}) {
    CAPTURE(q);
    const auto f = FieldCtx::from_order(q);
    const std::size_t bound = f.mod_class() == ModClass::three_mod_4 ? 1 : 2;
    for (std::uint32_t i = 1; i < q; ++i)
      for (std::uint32_t j = 1; j < q; ++j) {
        if (!is_vertex(f, f.element(i), f.element(j))) continue;
        const Vertex v{f.element(i), f.element(j)};
        if (f.mod_class() == ModClass::five_mod_8 && children(f, v).empty()) {
          REQUIRE_THROWS_AS(agm_sequence(f, v), SequenceError);
          continue;
        }
        const AgmSequence s = agm_sequence(f, v);
        REQUIRE(s.preperiod.size() <= bound);
        std::vector<Vertex> all = s.preperiod;
        all.insert(all.end(), s.period.begin(), s.period.end());
        all.push_back(s.period.front());
        for (std::size_t t = 0; t + 1 < all.size(); ++t) REQUIRE(children(f, all[t]).contains(all[t + 1]));
        std::set<Vertex> distinct(all.begin(), all.end() - 1);
        REQUIRE(distinct.size() + 1 == all.size());
      }
  }
}

TEST_CASE("sequences are refused for q = 1 mod 8") {
  const auto f = FieldCtx::from_order(17);
  for (std::uint32_t i = 1; i < 17; ++i)
    for (std::uint32_t j = 1; j < 17; ++j) {
      if (!is_vertex(f, f.element(i), f.element(j))) continue;
      try {
        agm_sequence(f, Vertex{f.element(i), f.element(j)});
        FAIL("expected an error");
      } catch (const SequenceError& e) {
        CHECK(e.failure() == SequenceFailure::unsupported_mod_class);
      }
      return;
    }
}

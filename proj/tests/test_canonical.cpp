#include <random>

#include "ckcalc/canonical.hpp"
#include "doctest.h"

using namespace ck;

namespace {
SpaceP sp(const std::string& s) { return parse_space(s); }
Ordinal ord(const std::string& s) { return parse_ordinal(s); }
}  // namespace

TEST_CASE("canonical tree shapes") {
  CHECK(space_eq(canonical_tree(sp("I(0,4)")), sp("fin(4)")));
  CHECK(space_eq(canonical_tree(sp("I(1,1)")), sp("op(w,fin(1))")));
  CHECK(space_eq(canonical_tree(sp("I(1,2)")),
                 sp("sum(op(w,fin(1)),op(w,fin(1)))")));
  CHECK(space_eq(canonical_tree(sp("I(2,1)")), sp("op(w,op(w,fin(1)))")));
  CHECK(space_eq(canonical_tree(sp("I(w,1)")), sp("opramp(w)")));
  CHECK(space_eq(canonical_tree(sp("cantor")), sp("cantor")));
  CHECK_THROWS_AS(canonical_tree(sp("[1,omega1]")), NotConstructive);
  // canonical trees are fixed points of the construction
  for (const char* e : {"I(3,2)", "I(w+1,1)", "sum(I(1,1),I(2,3))"}) {
    SpaceP t = canonical_tree(sp(e));
    CHECK(space_eq(canonical_tree(t), t));
  }
}

TEST_CASE("tree point <-> ordinal round trip") {
  std::mt19937_64 rng(7);
  for (const char* ae : {"1", "2", "w", "w+1", "w^(2)"}) {
    Ordinal alpha = ord(ae);
    for (long long m = 1; m <= 3; ++m) {
      SpaceP tree = canonical_tree(space_interval(alpha, m));
      // full range endpoints plus random interior ordinals
      std::vector<Ordinal> samples = {ord("1"), mul_nat(omega_pow(alpha), m)};
      for (int t = 0; t < 30; ++t) {
        std::vector<std::pair<Ordinal, long long>> ts;
        Ordinal top = alpha;
        while (!top.is_zero() && rng() % 2) {
          OrdinalClass c = classify(top);
          top = c.kind == OrdinalClass::Successor ? c.pred : fund_seq(top, rng() % 3 + 1);
        }
        samples.push_back(add(omega_pow(top), Ordinal::from_nat(rng() % 3)));
      }
      for (const Ordinal& o : samples) {
        if (o.is_zero() || mul_nat(omega_pow(alpha), m) < o) continue;
        Point p = ordinal_to_tree_point(alpha, m, o);
        CHECK(valid_point(tree, p));
        CHECK(tree_point_to_ordinal(alpha, m, p) == o);
      }
      CHECK_THROWS_AS(ordinal_to_tree_point(alpha, m, Ordinal()), InvalidPoint);
      CHECK_THROWS_AS(
          ordinal_to_tree_point(alpha, m, add(mul_nat(omega_pow(alpha), m), ord("1"))),
          InvalidPoint);
    }
  }
}

TEST_CASE("derivative membership matches the ordinal rank rule") {
  // oracle: the ordinal o = w^(e1)*c1 + ... survives the beta-th derivative of
  // [1, w^a * m] iff beta <= least exponent of o in CNF
  std::mt19937_64 rng(8);
  Ordinal alpha = ord("w^(2)");
  long long m = 2;
  SpaceP tree = canonical_tree(space_interval(alpha, m));
  int checked = 0;
  for (int t = 0; t < 400; ++t) {
    std::vector<std::pair<Ordinal, long long>> ts;
    for (long long e = 3; e >= 0; --e)
      if (rng() % 2) ts.push_back({Ordinal::from_nat(e), (long long)(rng() % 3 + 1)});
    Ordinal o = Ordinal::make(ts);
    if (o.is_zero() || mul_nat(omega_pow(alpha), m) < o) continue;
    Ordinal least = o.terms().back().exp;
    Point p = ordinal_to_tree_point(alpha, m, o);
    for (const char* be : {"0", "1", "2", "3", "w"}) {
      Ordinal beta = ord(be);
      CHECK(in_derived(tree, beta, p) == (beta <= least));
      ++checked;
    }
  }
  CHECK(checked > 500);
}

TEST_CASE("to_derived_point lands in the derived space") {
  SpaceP s = sp("sum(I(2,1),I(3,2),fin(4))");
  SpaceP tree = canonical_tree(s);
  Point top = ordinal_to_tree_point(ord("3"), 2, mul_nat(omega_pow(ord("3")), 2)).prepend(
      Point::SumBranch{1});
  REQUIRE(valid_point(tree, top));
  REQUIRE(in_derived(tree, ord("2"), top));
  Point q = to_derived_point(tree, ord("2"), top);
  CHECK(valid_point(derived(tree, ord("2")), q));
  Point leaf = Point::of(Point::SumBranch{2});
  leaf.path.push_back(Point::LeafIndex{3});
  CHECK(in_derived(tree, Ordinal(), leaf));
  CHECK(!in_derived(tree, ord("1"), leaf));
  CHECK_THROWS_AS(to_derived_point(tree, ord("1"), leaf), InvalidPoint);
}

TEST_CASE("points in atoms of the tree grammar") {
  SpaceP s = sp("sum(cantor,unit)");
  Point c = Point::of(Point::SumBranch{0});
  c.path.push_back(Point::CantorPrefix{"0110", true});
  CHECK(valid_point(s, c));
  Point u = Point::of(Point::SumBranch{1});
  u.path.push_back(Point::UnitCoord{Rational(1, 3)});
  CHECK(valid_point(s, u));
  Point bad = Point::of(Point::SumBranch{2});
  CHECK(!valid_point(s, bad));
  // nonscattered atoms survive every derivative
  CHECK(in_derived(s, ord("w^(w)"), c));
}

TEST_CASE("point JSON and printing round trip") {
  SpaceP tree = canonical_tree(sp("I(w+1,2)"));
  Point p = ordinal_to_tree_point(ord("w+1"), 2, add(omega_pow(ord("w+1")), omega_pow(ord("w"))));
  Point q = point_from_json(point_to_json(p));
  CHECK(point_str(p) == point_str(q));
  CHECK(valid_point(tree, q));
  Point c;
  c.path.push_back(Point::CantorPrefix{"101", false});
  CHECK(point_str(point_from_json(point_to_json(c))) == point_str(c));
}

TEST_CASE("first point exists and is valid") {
  for (const char* e : {"fin(3)", "I(w,2)", "cantor", "sum(I(1,1),unit)",
                        "op(w,fin(2))", "opramp(w^(2))"}) {
    SpaceP s = sp(e);
    Point p = first_point(s);
    CHECK(valid_point(s, p));
  }
}

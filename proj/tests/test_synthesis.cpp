#include <random>

#include "ckcalc/synthesis.hpp"
#include "doctest.h"

using namespace ck;

namespace {

SpaceP sp(const std::string& s) { return parse_space(s); }
Ordinal ord(const std::string& s) { return parse_ordinal(s); }

FunctionRep rand_fn(std::mt19937_64& rng, const SpaceP& s, int depth = 0) {
  auto rq = [&] { return Rational((long long)(rng() % 9) - 4, (long long)(rng() % 3 + 1)); };
  if (depth > 4) return const_fn(s, rq());
  return std::visit(
      [&](const auto& n) -> FunctionRep {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Space::Fin>) {
          std::vector<Rational> vs;
          for (long long i = 0; i < n.n; ++i) vs.push_back(rq());
          return FunctionRep::leaf(vs);
        } else if constexpr (std::is_same_v<T, Space::SumN>) {
          std::vector<FunctionRep> ps;
          for (const auto& p : n.parts) ps.push_back(rand_fn(rng, p, depth + 1));
          return FunctionRep::sum(ps);
        } else if constexpr (std::is_same_v<T, Space::OnePointN>) {
          std::map<long long, FunctionRep> cs;
          long long k = rng() % 3 + 1;
          for (long long c = 1; c <= k; ++c)
            cs[c] = rand_fn(rng, member_space(n, c), depth + 1);
          return FunctionRep::onepoint(rq(), cs);
        } else if constexpr (std::is_same_v<T, Space::CantorA>) {
          int d = rng() % 3;
          std::vector<Rational> vs;
          for (int i = 0; i < (1 << d); ++i) vs.push_back(rq());
          return FunctionRep::cantor(d, vs);
        } else {
          return const_fn(s, rq());
        }
      },
      s->node);
}

// exact operator laws on a batch of deterministic random inputs
void check_embedding(const Operator& T, std::uint64_t seed, int trials,
                     bool expect_lattice) {
  std::mt19937_64 rng(seed);
  const SpaceP& L = T.domain();
  const SpaceP& K = T.codomain();
  ClopenRegion supp = support_of(T);
  for (int t = 0; t < trials; ++t) {
    FunctionRep f = rand_fn(rng, L), g = rand_fn(rng, L);
    FunctionRep Tf = apply(T, f), Tg = apply(T, g);
    CHECK(fn_eq(K, apply(T, add(L, f, g)), add(K, Tf, Tg)));
    CHECK(fn_eq(K, apply(T, scale(L, f, Rational(-5, 3))), scale(K, Tf, Rational(-5, 3))));
    CHECK(norm(Tf) == norm(f));
    CHECK(norm_pos(Tf) == norm_pos(f));
    CHECK(is_supported_by(K, Tf, supp));
    if (expect_lattice) {
      CHECK(fn_eq(K, apply(T, pointwise_max(L, f, g)), pointwise_max(K, Tf, Tg)));
      CHECK(fn_eq(K, apply(T, mul(L, f, g)), mul(K, Tf, Tg)));
    }
  }
}

}  // namespace

TEST_CASE("carver is deterministic and prefix stable") {
  SpaceP K = canonical_tree(sp("I(w^(2),1)"));
  std::vector<Ordinal> d1 = {ord("w"), ord("1"), ord("w*2")};
  std::vector<Ordinal> d2 = d1;
  d2.push_back(ord("2"));
  auto r1 = carve_regions(K, ClopenRegion::whole(), d1);
  auto r1b = carve_regions(K, ClopenRegion::whole(), d1);
  auto r2 = carve_regions(K, ClopenRegion::whole(), d2);
  REQUIRE(r1.size() == 3);
  REQUIRE(r2.size() == 4);
  for (size_t i = 0; i < r1.size(); ++i) {
    CHECK(region_to_json(r1[i]).dump() == region_to_json(r1b[i]).dump());
    CHECK(region_to_json(r1[i]).dump() == region_to_json(r2[i]).dump());
  }
  // carved regions are disjoint subregions meeting their demands
  for (size_t i = 0; i < r2.size(); ++i) {
    CHECK(region_derived_nonempty(K, r2[i], d2[i]));
    for (size_t j = i + 1; j < r2.size(); ++j) CHECK(disjoint(K, r2[i], r2[j]));
  }
}

TEST_CASE("split_region refuses impossible demands") {
  SpaceP K2 = canonical_tree(sp("I(2,1)"));
  CHECK(split_region(K2, ClopenRegion::whole(), {ord("1"), ord("0")}).size() == 2);
  SpaceP K1 = canonical_tree(sp("I(1,1)"));
  CHECK_THROWS_AS(split_region(K1, ClopenRegion::whole(), {ord("1"), ord("1")}),
                  InsufficientHeight);
  CHECK_THROWS_AS(split_region(K1, ClopenRegion::whole(), {ord("2")}), InsufficientHeight);
}

TEST_CASE("interval embeddings on fixed instances") {
  struct Case { const char* alpha; long long m; const char* K; };
  for (const Case& c : {Case{"1", 2, "I(2,1)"}, Case{"2", 1, "I(w,1)"},
                        Case{"w", 1, "I(w*2,1)"}, Case{"w+1", 2, "I(w^(2),1)"},
                        Case{"0", 3, "I(1,1)"}}) {
    Operator T = synth_interval_embedding(sp(c.K), ord(c.alpha), c.m, ClopenRegion::whole());
    CHECK(space_eq(T.domain(), canonical_tree(space_interval(ord(c.alpha), c.m))));
    check_embedding(T, 31, 12, false);
  }
}

TEST_CASE("one-point family embeddings") {
  SpaceP K = sp("sum(I(1,1),I(1,1),I(1,1))");
  Operator T = synth_onepoint_embedding(K, 3, ord("1"));
  check_embedding(T, 32, 12, false);
  CHECK_THROWS_AS(synth_onepoint_embedding(K, 4, ord("1")), InsufficientCellularity);
  Operator Ti = synth_onepoint_embedding_inf(sp("I(w,1)"), ord("1"));
  check_embedding(Ti, 33, 12, false);
}

TEST_CASE("surjections evaluate into their target") {
  SpaceP K = sp("I(w^(2),1)");
  Ordinal alpha = ord("w");
  SurjectionMap M = synth_surjection(K, alpha, 2, ClopenRegion::whole());
  SpaceP src = M.source();
  SpaceP tgt = M.target();
  std::mt19937_64 rng(34);
  int seen = 0;
  for (int t = 0; t < 60; ++t) {
    FunctionRep f = rand_fn(rng, src);
    for (const Point& p : probe_points(src, f)) {
      Point q = surj_eval(M, p);
      CHECK(valid_point(tgt, q));
      ++seen;
    }
  }
  CHECK(seen > 100);
  // the top point of each segment is reached
  Point inf_pt = Point::of(Point::AtInfinity{});
  CHECK(valid_point(src, inf_pt));
}

TEST_CASE("composition operators agree with the surjection pointwise") {
  SpaceP K = sp("I(w,1)");
  SurjectionMap M = synth_surjection(K, ord("1"), 2, ClopenRegion::whole());
  Operator T = composition_operator(M);
  std::mt19937_64 rng(35);
  int seen = 0;
  for (int t = 0; t < 40; ++t) {
    FunctionRep f = rand_fn(rng, T.domain());
    FunctionRep Tf = apply(T, f);
    for (const Point& p : probe_points(T.codomain(), Tf)) {
      Point q = surj_eval(M, p);
      // surjections land in the interval; lift back to its canonical tree
      const auto& o = std::get<Point::OrdinalPoint>(q.path.at(0)).o;
      Point qt = ordinal_to_tree_point(ord("1"), 2, o);
      CHECK(eval(T.codomain(), Tf, p) == eval(T.domain(), f, qt));
      ++seen;
    }
  }
  CHECK(seen > 100);
  check_embedding(T, 36, 10, true);
}

TEST_CASE("cantor surjection and milutin embedding") {
  SpaceP K = sp("sum(I(1,1),cantor)");
  SurjectionMap M = synth_cantor_surjection(K, ClopenRegion::whole());
  Point p = Point::of(Point::SumBranch{1});
  p.path.push_back(Point::CantorPrefix{"0110", true});
  Point q = surj_eval(M, p);
  CHECK(valid_point(M.target(), q));
  Operator T = synth_cantor_embedding(K, ClopenRegion::whole());
  check_embedding(T, 37, 10, true);
  CHECK_THROWS_AS(synth_cantor_surjection(sp("I(w,1)"), ClopenRegion::whole()), KernelEmpty);
}

TEST_CASE("validated constructors reject bad data") {
  SpaceP K = canonical_tree(sp("I(1,1)"));
  ClopenRegion a = ClopenRegion::onepoint_select({{1, ClopenRegion::whole()}}, false);
  ClopenRegion b = ClopenRegion::onepoint_select({{1, ClopenRegion::whole()},
                                                  {2, ClopenRegion::whole()}}, false);
  CHECK_THROWS_AS(make_cells(space_fin(2), K, {a, b}), RegionOverlap);
  CHECK_THROWS_AS(make_cells(space_fin(2), K, {a, ClopenRegion::none()}),
                  ContainmentViolation);
  Operator inner = synth_interval_embedding(K, ord("0"), 1, a);
  CHECK_THROWS_AS(make_blocks(canonical_tree(sp("sum(fin(1))")), K,
                              {{ClopenRegion::none(), inner}}),
                  ContainmentViolation);
  CHECK_THROWS_AS(synth_interval_embedding(sp("I(1,1)"), ord("2"), 1, ClopenRegion::whole()),
                  InsufficientDerivedSet);
  CHECK_THROWS_AS(synth_interval_embedding(sp("unit"), ord("1"), 1, ClopenRegion::whole()),
                  NotZeroDimensional);
}

TEST_CASE("operator and surjection JSON round trips") {
  std::mt19937_64 rng(38);
  std::vector<Operator> ops = {
      synth_interval_embedding(sp("I(2,1)"), ord("1"), 2, ClopenRegion::whole()),
      synth_interval_embedding(sp("I(w,1)"), ord("2"), 1, ClopenRegion::whole()),
      synth_onepoint_embedding(sp("sum(I(1,1),I(1,1))"), 2, ord("1")),
      synth_cantor_embedding(sp("cantor"), ClopenRegion::whole()),
  };
  for (const Operator& T : ops) {
    Operator T2 = op_from_json(op_to_json(T));
    CHECK(op_to_json(T2).dump() == op_to_json(T).dump());
    for (int t = 0; t < 8; ++t) {
      FunctionRep f = rand_fn(rng, T.domain());
      CHECK(fn_eq(T.codomain(), apply(T, f), apply(T2, f)));
    }
  }
  SurjectionMap M = synth_surjection(sp("I(w,1)"), ord("1"), 1, ClopenRegion::whole());
  SurjectionMap M2 = surj_from_json(surj_to_json(M));
  CHECK(surj_to_json(M2).dump() == surj_to_json(M).dump());
  for (int t = 0; t < 20; ++t) {
    FunctionRep f = rand_fn(rng, M.source());
    for (const Point& p : probe_points(M.source(), f))
      CHECK(point_str(surj_eval(M, p)) == point_str(surj_eval(M2, p)));
  }
}

TEST_CASE("lazy parts beyond the stored floor are regenerated consistently") {
  // glue with floor 1: child 9 of the domain must still map isometrically
  SpaceP K = sp("I(w,1)");
  Operator T = synth_interval_embedding(K, ord("2"), 1, ClopenRegion::whole());
  SpaceP L = T.domain();
  std::map<long long, FunctionRep> cs;
  cs[9] = FunctionRep::onepoint(Rational(0), {{1, FunctionRep::leaf({Rational(7, 2)})}});
  FunctionRep f = FunctionRep::onepoint(Rational(0), cs);
  REQUIRE(shape_ok(L, f));
  FunctionRep Tf = apply(T, f);
  CHECK(norm(Tf) == Rational(7, 2));
  CHECK(norm_pos(Tf) == Rational(7, 2));
  // same through the serialized form
  Operator T2 = op_from_json(op_to_json(T));
  CHECK(fn_eq(T.codomain(), apply(T2, f), Tf));
}

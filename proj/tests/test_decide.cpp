#include <random>

#include "ckcalc/decide.hpp"
#include "doctest.h"

using namespace ck;

namespace {
SpaceP sp(const std::string& s) { return parse_space(s); }
Ordinal ord(const std::string& s) { return parse_ordinal(s); }
}  // namespace

TEST_CASE("szlenk index closed form") {
  // Sz(C([1, w^(w^a)])) = w^(a+1)
  CHECK(szlenk_of(sp("I(1,1)")).str() == "w");
  CHECK(szlenk_of(sp("I(w,1)")).str() == "w^(2)");
  CHECK(szlenk_of(sp("I(w^(2),1)")).str() == "w^(3)");
  CHECK(szlenk_of(sp("I(w^(w),1)")).str() == "w^(w+1)");
  CHECK(szlenk_of(sp("I(5,3)")).str() == "w");
  CHECK(szlenk_of(sp("I(w+1,1)")).str() == "w^(2)");
  CHECK(szlenk_of(sp("cantor")).str() == "infinity");
  CHECK_THROWS_AS(szlenk_of(sp("[1,omega1]")), HeightBeyondScale);
  // monotone under sums: the larger summand wins
  CHECK(szlenk_of(sp("sum(I(1,1),I(w,1))")).str() == szlenk_of(sp("I(w,1)")).str());
}

TEST_CASE("isometric embeddings, scattered instances") {
  Verdict v = isometric_embeds(sp("I(1,1)"), sp("I(2,1)"));
  CHECK(v.answer == Truth3::Yes);
  CHECK(!v.certificate.is_null());
  CHECK(isometric_embeds(sp("I(2,1)"), sp("I(1,1)")).answer == Truth3::No);
  CHECK(isometric_embeds(sp("I(w,1)"), sp("I(w,1)")).answer == Truth3::Yes);
  CHECK(isometric_embeds(sp("I(w+1,1)"), sp("I(w,1)")).answer == Truth3::No);
  // certificates deserialize into working operators
  Operator T = op_from_json(v.certificate);
  FunctionRep f = const_fn(T.domain(), Rational(2, 3));
  CHECK(norm(apply(T, f)) == Rational(2, 3));
}

TEST_CASE("isometric embeddings, nonscattered instances") {
  // scattered K cannot host a nonscattered L
  CHECK(isometric_embeds(sp("cantor"), sp("I(w^(3),1)")).answer == Truth3::No);
  // Milutin composition gives a constructive certificate into a Cantor kernel
  Verdict vc = isometric_embeds(sp("cantor"), sp("sum(I(1,1),cantor)"));
  CHECK(vc.answer == Truth3::Yes);
  CHECK(!vc.certificate.is_null());
  // metrizable L into the unit interval: decision-only positive rule
  Verdict vu = isometric_embeds(sp("I(w,1)"), sp("unit"));
  CHECK(vu.answer == Truth3::Yes);
  CHECK(vu.rule == "Rosenthal-2.8/Miljutin (decision-only)");
  CHECK(isometric_embeds(sp("unit"), sp("unit")).answer == Truth3::Yes);
  // nonmetrizable L is out of scope for the isometric theorem
  CHECK_THROWS_AS(isometric_embeds(sp("[1,omega1]"), sp("unit")), NotMetrizable);
}

TEST_CASE("isomorphic embeddings via Szlenk comparison") {
  CHECK(isomorphic_embeds(sp("I(w,1)"), sp("I(w*2,1)")).answer == Truth3::Yes);
  CHECK(isomorphic_embeds(sp("I(w^(w),1)"), sp("I(w,1)")).answer == Truth3::No);
  CHECK(isomorphic_embeds(sp("I(w+5,1)"), sp("I(w,1)")).answer == Truth3::Yes);
  CHECK(isomorphic_embeds(sp("I(2,1)"), sp("cantor")).answer == Truth3::Yes);
  CHECK(isomorphic_embeds(sp("cantor"), sp("I(w^(w),1)")).answer == Truth3::No);
  Verdict v = isomorphic_embeds(sp("I(w+1,1)"), sp("I(w^(2),1)"));
  CHECK(v.answer == Truth3::Yes);
  CHECK(!v.certificate.is_null());
}

TEST_CASE("condition checks reproduce the counterexample table") {
  struct Row { const char* L; const char* iv; const char* refuted; };
  // (K = unit) against the three nonmetrizable exemplars
  for (bool ch : {false, true}) {
    Verdict v1 = check_condition("iv", sp("[1,omega1]"), sp("unit"), ch);
    CHECK(v1.answer == Truth3::Yes);
    Verdict v2 = check_condition("ii", sp("[1,omega1]"), sp("unit"), ch);
    CHECK(v2.answer == Truth3::No);
    Verdict v3 = check_condition("iv", sp("bN_minus_N"), sp("unit"), ch);
    CHECK(v3.answer == Truth3::Yes);
    Verdict v4 = check_condition("iii", sp("bN_minus_N"), sp("unit"), ch);
    CHECK(v4.answer == Truth3::No);
    Verdict v5 = check_condition("iv", sp("[1,2^c]"), sp("unit"), ch);
    CHECK(v5.answer == Truth3::Yes);
    Verdict v6 = check_condition("iii", sp("[1,2^c]"), sp("unit"), ch);
    CHECK(v6.answer == Truth3::No);
    CHECK(v6.rule.find("alpha=0") != std::string::npos);
  }
}

TEST_CASE("condition (ii) positive and refuted cases") {
  // a constructive surjection exists: [1,w] is a quotient of [1,w^2]
  CHECK(check_condition("ii", sp("I(1,1)"), sp("I(2,1)"), false).answer == Truth3::Yes);
  // height refutes
  CHECK(check_condition("ii", sp("I(3,1)"), sp("I(1,1)"), false).answer == Truth3::No);
  // chain condition refutes: ccc K, non-ccc L
  CHECK(check_condition("ii", sp("[1,omega1]"), sp("cube_omega1"), false).answer ==
        Truth3::No);
  // the Cantor set maps onto itself
  CHECK(check_condition("ii", sp("cantor"), sp("cantor"), false).answer == Truth3::Yes);
}

TEST_CASE("cellularity bounds with constructive witnesses") {
  CellularityBound b3 =
      cellularity_bound(sp("sum(I(2,1),I(2,1),I(2,1),fin(5))"), ExtendedOrdinal(ord("2")));
  CHECK(b3.value == Cardinal::finite(3));
  CHECK(b3.witness_max == 3);
  CellularityBound b0 = cellularity_bound(sp("I(1,1)"), ExtendedOrdinal(ord("2")));
  CHECK(b0.value == Cardinal::finite(0));
  CHECK(b0.witness_max == 0);
  CellularityBound bc =
      cellularity_bound(sp("sum(cantor,cantor)"), ExtendedOrdinal::infinity());
  CHECK(bc.value == Cardinal::finite(2));
  CHECK(bc.witness_max == 2);
  CHECK_THROWS_AS(cantor_witness_operators(sp("sum(cantor,cantor)"), 3),
                  InsufficientCellularity);
}

TEST_CASE("agreement and monotonicity invariants") {
  std::mt19937_64 rng(41);
  const char* exprs[] = {"I(1,1)", "I(2,2)", "I(w,1)", "I(w+1,1)", "sum(I(1,1),I(2,1))",
                         "op(w,fin(2))", "I(w^(2),1)"};
  for (const char* le : exprs) {
    for (const char* ke : exprs) {
      SpaceP L = sp(le), K = sp(ke);
      Verdict iso = isometric_embeds(L, K);
      Verdict iv = check_condition("iv", L, K, false);
      CHECK(iso.answer == iv.answer);
      if (iso.answer == Truth3::Yes)
        CHECK(isomorphic_embeds(L, K).answer == Truth3::Yes);
      // reflexivity
      CHECK(isometric_embeds(L, L).answer == Truth3::Yes);
    }
  }
}

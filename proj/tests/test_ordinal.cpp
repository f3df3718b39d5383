#include <random>

#include "ckcalc/ordinal.hpp"
#include "doctest.h"

using namespace ck;

namespace {

// Independent oracle: ordinals below w^4 as coefficient vectors [c3,c2,c1,c0]
// with addition and comparison written directly from the absorption rule.
struct SmallOrdinal {
  long long c[4] = {0, 0, 0, 0};

  static SmallOrdinal from(const Ordinal& o) {
    SmallOrdinal s;
    for (const auto& t : o.terms()) {
      auto e = t.exp.as_nat();
      REQUIRE(e);
      REQUIRE(*e < 4);
      s.c[3 - *e] = t.coeff;
    }
    return s;
  }
  Ordinal to() const {
    std::vector<std::pair<Ordinal, long long>> ts;
    for (int i = 0; i < 4; ++i)
      if (c[i] > 0) ts.push_back({Ordinal::from_nat(3 - i), c[i]});
    return Ordinal::make(ts);
  }
  friend SmallOrdinal oadd(const SmallOrdinal& a, const SmallOrdinal& b) {
    int lead = 0;
    while (lead < 3 && b.c[lead] == 0) ++lead;
    SmallOrdinal r = b;
    if (b.c[0] == 0 && b.c[1] == 0 && b.c[2] == 0 && b.c[3] == 0) return a;
    for (int i = 0; i < lead; ++i) r.c[i] = a.c[i];
    r.c[lead] = a.c[lead] + b.c[lead];
    return r;
  }
  friend bool oless(const SmallOrdinal& a, const SmallOrdinal& b) {
    for (int i = 0; i < 4; ++i)
      if (a.c[i] != b.c[i]) return a.c[i] < b.c[i];
    return false;
  }
  friend bool oeq(const SmallOrdinal& a, const SmallOrdinal& b) {
    return !oless(a, b) && !oless(b, a);
  }
};

Ordinal random_below_w4(std::mt19937_64& rng) {
  std::vector<std::pair<Ordinal, long long>> ts;
  for (long long e = 3; e >= 0; --e)
    if (rng() % 2) ts.push_back({Ordinal::from_nat(e), (long long)(rng() % 4 + 1)});
  return Ordinal::make(ts);
}

}  // namespace

TEST_CASE("cnf addition against the coefficient-vector oracle") {
  std::mt19937_64 rng(0);
  for (int t = 0; t < 500; ++t) {
    Ordinal a = random_below_w4(rng), b = random_below_w4(rng);
    SmallOrdinal sa = SmallOrdinal::from(a), sb = SmallOrdinal::from(b);
    CHECK(add(a, b) == oadd(sa, sb).to());
    CHECK((a < b) == oless(sa, sb));
    CHECK((a == b) == oeq(sa, sb));
  }
}

TEST_CASE("ordinal laws on random pairs") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 300; ++t) {
    Ordinal a = random_below_w4(rng), b = random_below_w4(rng), c = random_below_w4(rng);
    CHECK(add(add(a, b), c) == add(a, add(b, c)));
    CHECK(add(a, Ordinal()) == a);
    CHECK(add(Ordinal(), a) == a);
    CHECK(a <= add(a, b));
    if (!b.is_zero()) CHECK(a < add(a, b));
    // left subtraction: a + (b \ a) = b whenever a <= b
    if (a <= b) CHECK(add(a, left_subtract(a, b)) == b);
  }
}

TEST_CASE("absorption and examples") {
  CHECK(add(parse_ordinal("1"), parse_ordinal("w")) == parse_ordinal("w"));
  CHECK(add(parse_ordinal("w"), parse_ordinal("1")) == parse_ordinal("w+1"));
  CHECK(print(add(parse_ordinal("w^(2)*3+w"), parse_ordinal("w*2+5"))) == "w^(2)*3+w*3+5");
  CHECK_THROWS_AS(left_subtract(parse_ordinal("w"), parse_ordinal("1")), SubtractUnderflow);
}

TEST_CASE("classification and fundamental sequences") {
  OrdinalClass z = classify(Ordinal());
  CHECK(z.kind == OrdinalClass::Zero);
  OrdinalClass s = classify(parse_ordinal("w+3"));
  CHECK(s.kind == OrdinalClass::Successor);
  CHECK(s.pred == parse_ordinal("w+2"));
  CHECK(classify(parse_ordinal("w^(2)")).kind == OrdinalClass::Limit);

  CHECK(fund_seq(parse_ordinal("w"), 3) == parse_ordinal("3"));
  CHECK(fund_seq(parse_ordinal("w^(2)"), 3) == parse_ordinal("w*3"));
  CHECK(fund_seq(parse_ordinal("w^(w)"), 2) == parse_ordinal("w^(2)"));
  CHECK(fund_seq(parse_ordinal("w^(w+1)"), 2) == parse_ordinal("w^(w)*2"));
  CHECK(fund_seq(parse_ordinal("w*2"), 4) == parse_ordinal("w+4"));
  CHECK_THROWS_AS(fund_seq(parse_ordinal("w+1"), 1), NotALimit);
  // fundamental sequences increase to the limit
  std::mt19937_64 rng(2);
  for (int t = 0; t < 100; ++t) {
    Ordinal a = random_below_w4(rng);
    if (!is_limit(a)) continue;
    CHECK(fund_seq(a, 2) < fund_seq(a, 3));
    CHECK(fund_seq(a, 3) < a);
  }
}

TEST_CASE("gamma numbers") {
  CHECK(gamma_of(ExtendedOrdinal(parse_ordinal("w+1"))).value ==
        ExtendedOrdinal(parse_ordinal("w^(2)")));
  CHECK(gamma_of(ExtendedOrdinal(parse_ordinal("w^(2)+1"))).value ==
        ExtendedOrdinal(parse_ordinal("w^(3)")));
  CHECK(gamma_of(ExtendedOrdinal(parse_ordinal("2"))).value ==
        ExtendedOrdinal(parse_ordinal("w")));
  CHECK(gamma_of(ExtendedOrdinal(parse_ordinal("w"))).value ==
        ExtendedOrdinal(parse_ordinal("w")));
  CHECK(gamma_of(ExtendedOrdinal::infinity()).value.is_infinite());
  CHECK(is_gamma(ExtendedOrdinal(parse_ordinal("w^(w)"))));
  CHECK(!is_gamma(ExtendedOrdinal(parse_ordinal("w*2"))));
}

TEST_CASE("print and parse are inverse") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    Ordinal a = random_below_w4(rng);
    CHECK(parse_ordinal(print(a)) == a);
  }
  CHECK(print(parse_ordinal("w^(w^(2)*3)*2+w*4+7")) == "w^(w^(2)*3)*2+w*4+7");
  CHECK_THROWS_AS(parse_ordinal("w^"), OrdinalSyntaxError);
  try {
    parse_ordinal("w^(2");
    CHECK(false);
  } catch (const OrdinalSyntaxError& e) {
    CHECK(e.position >= 3);
  }
}

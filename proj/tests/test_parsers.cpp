#include <random>

#include "ckcalc/verify.hpp"
#include "doctest.h"

using namespace ck;

namespace {

const char* kOrdinalCorpus[] = {
    "0", "1", "2", "17", "w", "w+1", "w+5", "w*2", "w*2+1", "w*9+8",
    "w^(2)", "w^(2)+1", "w^(2)*3", "w^(2)*3+w*2+1", "w^(3)+w^(2)+w+1",
    "w^(w)", "w^(w)+1", "w^(w)*2", "w^(w)*2+w^(2)*5+3", "w^(w+1)",
    "w^(w+1)*4+w^(w)", "w^(w*2)", "w^(w*2+1)+w", "w^(w^(2))",
    "w^(w^(2)+w)*2+w^(w)*7+w*3+1", "w^(w^(w))", "w^(w^(w)+1)+w^(2)",
};

const char* kSpaceCorpus[] = {
    "empty", "fin(1)", "fin(7)", "I(0,2)", "I(1,1)", "I(2,3)", "I(w,1)",
    "I(w+1,2)", "I(w*2,1)", "I(w^(2),1)", "I(w^(w),3)", "I(w^(w+1)*2+w,1)",
    "cantor", "unit", "[1,omega1]", "bN_minus_N", "cube_omega1", "[1,2^c]",
    "sum(fin(1),fin(2))", "sum(I(1,1),cantor,unit)", "sum(I(w,1),I(w,1))",
    "op(w,fin(1))", "op(w,fin(3))", "op(w,op(w,fin(1)))", "op(aleph1,fin(1))",
    "op(w,cantor)", "op(w,I(2,1))", "opramp(w)", "opramp(w^(2))", "opramp(w^(w))",
    "sum(op(w,fin(2)),opramp(w),I(3,2))", "derived(bN_minus_N,w)",
    "derived([1,omega1],w^(2))", "sum(sum(fin(1),fin(1)),fin(1))",
    "op(w,sum(fin(1),cantor))", "sum(I(w^(2),2),op(w,fin(1)),unit,cantor)",
};

}  // namespace

TEST_CASE("print-parse identity on the expression corpus") {
  int n = 0;
  for (const char* e : kOrdinalCorpus) {
    CHECK(print(parse_ordinal(e)) == e);
    ++n;
  }
  for (const char* e : kSpaceCorpus) {
    CHECK(print(parse_space(e)) == e);
    ++n;
  }
  CHECK(n >= 50);
}

TEST_CASE("parse-print identity on random spaces and ordinals") {
  TrialConfig cfg;
  std::mt19937_64 rng(51);
  for (int t = 0; t < 200; ++t) {
    SpaceP s = random_space(rng, cfg);
    SpaceP s2 = parse_space(print(s));
    CHECK(space_eq(s, s2));
    Ordinal o = random_small_ordinal(rng, 2);
    CHECK(parse_ordinal(print(o)) == o);
  }
}

TEST_CASE("extended ordinal parsing") {
  CHECK(parse_extended_ordinal("infinity").is_infinite());
  CHECK(parse_extended_ordinal("inf").is_infinite());
  CHECK(parse_extended_ordinal("w^(2)") == ExtendedOrdinal(parse_ordinal("w^(2)")));
  CHECK(parse_extended_ordinal("0") == ExtendedOrdinal(Ordinal()));
}

TEST_CASE("syntax errors carry positions") {
  for (const char* e : {"w^", "w^(", "w^(2", "w*", "+w", "w^()"}) {
    CHECK_THROWS_AS(parse_ordinal(e), OrdinalSyntaxError);
  }
  try {
    parse_ordinal("w^(2+");
    CHECK(false);
  } catch (const OrdinalSyntaxError& err) {
    CHECK(err.position >= 4);
  }
  for (const char* e : {"sum(", "I(w)", "fin()", "op(w)", "notaspace", "sum(fin(1),)"}) {
    CHECK_THROWS(parse_space(e));
  }
  try {
    parse_space("sum(fin(1),bogus)");
    CHECK(false);
  } catch (const std::exception& err) {
    CHECK(std::string(err.what()).find("bogus") != std::string::npos);
  }
}

TEST_CASE("grammar constraints are enforced") {
  CHECK_THROWS(parse_space("fin(0)"));
  CHECK_THROWS(parse_space("I(w,0)"));
  CHECK_THROWS(parse_space("opramp(w+1)"));
  CHECK_THROWS(parse_space("opramp(0)"));
  CHECK_THROWS(parse_space("sum()"));
}

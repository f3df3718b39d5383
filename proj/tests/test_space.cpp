#include "ckcalc/space.hpp"
#include "doctest.h"

using namespace ck;

namespace {
SpaceP sp(const std::string& s) { return parse_space(s); }
Ordinal ord(const std::string& s) { return parse_ordinal(s); }
}  // namespace

TEST_CASE("heights") {
  CHECK(height(sp("empty")) == ExtendedOrdinal(Ordinal()));
  CHECK(height(sp("fin(5)")) == ExtendedOrdinal(ord("1")));
  CHECK(height(sp("I(2,3)")) == ExtendedOrdinal(ord("3")));
  CHECK(height(sp("I(w,1)")) == ExtendedOrdinal(ord("w+1")));
  CHECK(height(sp("op(w,fin(2))")) == ExtendedOrdinal(ord("2")));
  CHECK(height(sp("sum(I(1,1),I(3,2))")) == ExtendedOrdinal(ord("4")));
  CHECK(height_info(sp("cantor")).kind == HeightInfo::Infinite);
  CHECK(height_info(sp("[1,omega1]")).kind == HeightInfo::BeyondScale);
  CHECK_THROWS_AS(height(sp("[1,omega1]")), HeightBeyondScale);
}

TEST_CASE("derivatives in closed form") {
  CHECK(space_eq(derived(sp("I(2,3)"), ord("1")), sp("I(1,3)")));
  CHECK(space_eq(derived(sp("I(2,3)"), ord("2")), sp("fin(3)")));
  CHECK(space_eq(derived(sp("I(2,3)"), ord("3")), sp("empty")));
  CHECK(space_eq(derived(sp("I(w^(2),1)"), ord("w")), sp("I(w^(2),1)")));
  CHECK(space_eq(derived(sp("opramp(w^(2))"), ord("w")), sp("I(w^(2),1)")));
  CHECK(space_eq(derived(sp("op(w,fin(3))"), ord("1")), sp("fin(1)")));
  CHECK(space_eq(derived(sp("op(w,fin(3))"), ord("2")), sp("empty")));
  CHECK(space_eq(derived(sp("sum(I(1,2),fin(4),cantor)"), ord("1")),
                 sp("sum(fin(2),cantor)")));
  CHECK(space_eq(derived(sp("cantor"), ord("w^(w)")), sp("cantor")));
  CHECK(space_eq(derived(sp("unit"), ord("5")), sp("unit")));
}

TEST_CASE("perfect kernel") {
  CHECK(space_eq(perfect_kernel(sp("I(w,5)")), sp("empty")));
  CHECK(space_eq(perfect_kernel(sp("sum(I(2,1),cantor,unit)")), sp("sum(cantor,unit)")));
  CHECK(space_eq(perfect_kernel(sp("op(w,cantor)")), sp("op(w,cantor)")));
  CHECK(scattered(sp("I(w^(w),9)")));
  CHECK(!scattered(sp("op(w,cantor)")));
}

TEST_CASE("cardinalities of derivatives") {
  CHECK(derived_card(sp("I(2,3)"), ord("2")) == Cardinal::finite(3));
  CHECK(derived_card(sp("I(2,3)"), ord("1")) == Cardinal::aleph0());
  CHECK(derived_card(sp("cantor"), ord("w^(3)")) == Cardinal::continuum());
  CHECK(derived_card(sp("sum(I(1,1),fin(7))"), ord("0")) == Cardinal::aleph0());
  CHECK(derived_card(sp("fin(7)"), ord("1")) == Cardinal::finite(0));
  CHECK(card_of(sp("[1,omega1]")) == Cardinal::aleph1());
  CHECK(card_of(sp("bN_minus_N")) == Cardinal::two_to_continuum());
  CHECK(card_of(sp("[1,2^c]")) == Cardinal::two_to_continuum());
  // the big interval drops to a single point at its top but stays huge below
  CHECK(derived_card_level(sp("[1,2^c]"), Level::atom_top()) == Cardinal::finite(1));
}

TEST_CASE("ms normal form") {
  auto [a1, m1] = ms_normal_form(sp("sum(I(1,1),fin(5))"));
  CHECK(a1 == ord("1"));
  CHECK(m1 == 1);
  auto [a2, m2] = ms_normal_form(sp("sum(I(2,1),I(2,2))"));
  CHECK(a2 == ord("2"));
  CHECK(m2 == 3);
  auto [a3, m3] = ms_normal_form(sp("op(w,I(1,1))"));
  CHECK(a3 == ord("2"));
  CHECK(m3 == 1);
  auto [a4, m4] = ms_normal_form(sp("fin(4)"));
  CHECK(a4 == ord("0"));
  CHECK(m4 == 4);
  CHECK_THROWS_AS(ms_normal_form(sp("cantor")), NotCountableCompact);
  CHECK_THROWS_AS(ms_normal_form(sp("[1,omega1]")), NotCountableCompact);
}

TEST_CASE("relative cellularity") {
  CHECK(rel_cellularity(sp("sum(I(2,1),I(2,1),I(2,1),fin(2))"),
                        ExtendedOrdinal(ord("2"))) == Cardinal::finite(3));
  CHECK(rel_cellularity(sp("I(2,1)"), ExtendedOrdinal(ord("3"))) == Cardinal::finite(0));
  CHECK(rel_cellularity(sp("I(2,5)"), ExtendedOrdinal(ord("1"))) == Cardinal::aleph0());
  CHECK(rel_cellularity(sp("sum(cantor,cantor)"), ExtendedOrdinal::infinity()) ==
        Cardinal::finite(2));
  CHECK(rel_cellularity(sp("op(w,I(1,1))"), ExtendedOrdinal(ord("2"))) ==
        Cardinal::finite(1));
}

TEST_CASE("predicates") {
  CHECK(metrizable(sp("sum(I(w,3),cantor,unit)")));
  CHECK(!metrizable(sp("[1,omega1]")));
  CHECK(!metrizable(sp("op(aleph1,fin(1))")));
  CHECK(zero_dimensional(sp("sum(I(w,3),cantor)")));
  CHECK(!zero_dimensional(sp("sum(fin(1),unit)")));
  CHECK(constructive(sp("op(w,cantor)")));
  CHECK(!constructive(sp("bN_minus_N")));
}

TEST_CASE("breakpoints and hereditary cellularity") {
  auto bp = card_breakpoints(sp("I(2,3)"));
  CHECK(bp.size() >= 2);
  CHECK(bp.front() == Level::of(Ordinal()));
  CHECK(hereditary_cellularity_bound(sp("unit")) == Cardinal::aleph0());
  CHECK(hereditary_cellularity_bound(sp("I(w,2)")) == Cardinal::aleph0());
  CHECK(card_le(Cardinal::aleph1(), hereditary_cellularity_bound(sp("[1,omega1]"))) ==
        Truth3::Yes);
}

TEST_CASE("derived atoms shift their profile") {
  SpaceP d = derived(sp("[1,omega1]"), ord("w"));
  CHECK(card_of(d) == Cardinal::aleph1());
  CHECK(height_info(d).kind == HeightInfo::BeyondScale);
  // nonscattered atoms keep their full profile at every shift
  SpaceP b = derived(sp("bN_minus_N"), ord("w^(w)"));
  CHECK(card_of(b) == card_of(sp("bN_minus_N")));
  CHECK(!scattered(b));
}

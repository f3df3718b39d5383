#ifndef CKCALC_DECIDE_HPP
#define CKCALC_DECIDE_HPP

#include "synthesis.hpp"

namespace ck {

struct NotMetrizable : std::runtime_error {
  NotMetrizable() : std::runtime_error("decision requires a metrizable domain space") {}
};

struct Verdict {
  Truth3 answer = Truth3::Independent;
  std::string rule;               // which theorem/condition decided it
  nlohmann::json certificate;     // operator / surjection / refuter, or null
  bool unknown = false;           // Independent by lack of a procedure, not by ZFC

  static Verdict yes(std::string rule, nlohmann::json cert = nullptr) {
    return {Truth3::Yes, std::move(rule), std::move(cert), false};
  }
  static Verdict no(std::string rule, nlohmann::json cert = nullptr) {
    return {Truth3::No, std::move(rule), std::move(cert), false};
  }
  static Verdict independent(std::string rule) {
    return {Truth3::Independent, std::move(rule), nullptr, false};
  }
  static Verdict unknown_v(std::string rule) {
    return {Truth3::Independent, std::move(rule), nullptr, true};
  }
};

struct SzlenkValue {
  GammaNumber value;  // infinity iff the space is nonscattered

  friend bool operator==(const SzlenkValue& a, const SzlenkValue& b) {
    return a.value == b.value;
  }
  std::string str() const { return print(value.value); }
};

inline SzlenkValue szlenk_of(const SpaceP& K) {
  HeightInfo h = height_info(K);
  if (h.kind == HeightInfo::Infinite) return {gamma_of(ExtendedOrdinal::infinity())};
  if (h.kind == HeightInfo::BeyondScale) throw HeightBeyondScale();
  return {gamma_of(ExtendedOrdinal(h.value))};
}

namespace detail {

inline Verdict with_answer(Truth3 t, std::string rule_yes, std::string rule_no) {
  if (t == Truth3::Yes) return Verdict::yes(std::move(rule_yes));
  if (t == Truth3::No) return Verdict::no(std::move(rule_no));
  return Verdict::independent("cardinal comparison independent of ZFC");
}

// Condition (iv): nonscattered L forces nonscattered K; scattered L compares
// top-level cardinalities at ht(L)-1.
inline Verdict condition_iv(const SpaceP& L, const SpaceP& K, bool assume_ch) {
  if (is_empty_space(L)) return Verdict::yes("(iv): empty domain");
  if (!scattered(L)) {
    if (!scattered(K)) return Verdict::yes("(iv): both spaces nonscattered");
    return Verdict::no("(iv): K scattered but L is not");
  }
  Level top = top_level(L);
  Cardinal lhs = derived_card_level(L, top);
  Cardinal rhs = derived_card_level(K, top);
  return with_answer(card_le(lhs, rhs, assume_ch),
                     "(iv): |L^(ht(L)-1)| <= |K^(ht(L)-1)|",
                     "(iv): |L^(ht(L)-1)| > |K^(ht(L)-1)|");
}

inline std::vector<Level> joint_levels(const SpaceP& L, const SpaceP& K) {
  std::vector<Level> lv;
  collect_breakpoints(L, lv);
  collect_breakpoints(K, lv);
  lv.push_back(Level::inf());
  std::sort(lv.begin(), lv.end());
  lv.erase(std::unique(lv.begin(), lv.end()), lv.end());
  return lv;
}

}  // namespace detail

inline Verdict isometric_embeds(const SpaceP& L, const SpaceP& K, bool assume_ch = false) {
  if (!metrizable(L)) throw NotMetrizable();
  if (is_empty_space(L)) return Verdict::yes("empty domain embeds trivially");
  if (!scattered(L)) {
    if (scattered(K)) return Verdict::no("(iv): K scattered but L is not");
    if (constructive(K) && zero_dimensional(K)) {
      Operator T = synth_cantor_embedding(K, ClopenRegion::whole());
      return Verdict::yes("Milutin composition through the Cantor kernel", op_to_json(T));
    }
    return Verdict::yes("Rosenthal-2.8/Miljutin (decision-only)");
  }
  Verdict iv = detail::condition_iv(L, K, assume_ch);
  if (iv.answer != Truth3::Yes) return iv;
  if (constructive(K) && zero_dimensional(K) && constructive(L)) {
    auto [d, m] = ms_normal_form(L);
    Operator T = synth_interval_embedding(K, d, m, ClopenRegion::whole());
    return Verdict::yes("(iv) + Mazurkiewicz-Sierpinski normal form", op_to_json(T));
  }
  if (!scattered(K)) return Verdict::yes("Rosenthal-2.8/Miljutin (decision-only)");
  return Verdict::yes(iv.rule + " (decision-only)");
}

inline Verdict isomorphic_embeds(const SpaceP& L, const SpaceP& K) {
  if (!metrizable(L)) throw NotMetrizable();
  if (is_empty_space(L)) return Verdict::yes("empty domain embeds trivially");
  HeightInfo hL = height_info(L), hK = height_info(K);
  auto rank = [](const HeightInfo& h) {
    return h.kind == HeightInfo::Representable ? 0 : h.kind == HeightInfo::BeyondScale ? 1 : 2;
  };
  bool le = rank(hL) != rank(hK) ? rank(hL) < rank(hK)
                                 : rank(hL) != 0 || gamma_of(ExtendedOrdinal(hL.value)) <=
                                                        gamma_of(ExtendedOrdinal(hK.value));
  if (!le) return Verdict::no("Szlenk comparison: Gamma(ht(L)) > Gamma(ht(K))");
  // certificate: route through the Bessaga-Pelczynski representative of C(L)
  if (constructive(L) && constructive(K) && zero_dimensional(K) && scattered(L)) {
    auto [d, m] = ms_normal_form(L);
    Ordinal xi;  // largest xi with w^xi <= d; C(L) is isomorphic to C([1, w^(w^xi)])
    if (!d.is_zero()) xi = d.terms()[0].exp;
    Ordinal rep = omega_pow(xi);
    if (derived_card(canonical_tree(K), rep) != Cardinal::finite(0)) {
      Operator T = synth_interval_embedding(K, rep, 1, ClopenRegion::whole());
      return Verdict::yes("Szlenk comparison + Bessaga-Pelczynski representative",
                          op_to_json(T));
    }
  }
  return Verdict::yes("Szlenk comparison: Gamma(ht(L)) <= Gamma(ht(K)) (decision-only)");
}

inline Verdict check_condition(const std::string& cond, const SpaceP& L, const SpaceP& K,
                               bool assume_ch = false) {
  if (cond == "iv") return detail::condition_iv(L, K, assume_ch);

  if (cond == "iii" || cond == "cell_necessary") {
    bool cellular = cond == "cell_necessary";
    Truth3 acc = Truth3::Yes;
    std::string where;
    for (const Level& lv : detail::joint_levels(L, K)) {
      Cardinal a = cellular ? rel_cellularity_level(L, lv) : derived_card_level(L, lv);
      Cardinal b = cellular ? rel_cellularity_level(K, lv) : derived_card_level(K, lv);
      Truth3 t = card_le(a, b, assume_ch);
      if (t == Truth3::No) {
        acc = Truth3::No;
        where = lv.str();
        break;
      }
      if (t == Truth3::Independent) acc = Truth3::Independent;
    }
    std::string tag = cellular ? "relative cellularity profiles" : "derived-set cardinality profiles";
    if (acc == Truth3::Yes) return Verdict::yes("(" + cond + "): " + tag + " compare pointwise");
    if (acc == Truth3::No)
      return Verdict::no("(" + cond + "): " + tag + " fail at alpha=" + where);
    return Verdict::independent("(" + cond + "): profile comparison independent of ZFC");
  }

  if (cond == "ii") {
    // necessary refuters for a closed subset of K mapping onto L
    HeightInfo hL = height_info(L), hK = height_info(K);
    auto rank = [](const HeightInfo& h) {
      return h.kind == HeightInfo::Representable ? 0
             : h.kind == HeightInfo::BeyondScale ? 1
                                                 : 2;
    };
    bool hle = rank(hL) != rank(hK) ? rank(hL) < rank(hK)
                                    : rank(hL) != 0 || hL.value <= hK.value;
    if (!hle) return Verdict::no("(ii): height refuter ht(L) > ht(K)");
    // disjoint open families lift through a surjection, so c(L) exceeding the
    // hereditary cellularity of K is a refuter
    if (card_le(rel_cellularity_level(L, Level::of(Ordinal())),
                hereditary_cellularity_bound(K), assume_ch) == Truth3::No)
      return Verdict::no("(ii): chain-condition refuter c(L) > hereditary c(K)");
    Verdict cell = check_condition("cell_necessary", L, K, assume_ch);
    if (cell.answer == Truth3::No)
      return Verdict::no("(ii): relative-cellularity refuter; " + cell.rule);
    if (constructive(K) && zero_dimensional(K) && constructive(L)) {
      try {
        if (!scattered(L)) {
          SurjectionMap rho = synth_cantor_surjection(K, ClopenRegion::whole());
          return Verdict::yes("(ii): synthesized surjection onto the Cantor set",
                              surj_to_json(rho));
        }
        if (is_empty_space(L)) return Verdict::yes("(ii): empty target");
        auto [d, m] = ms_normal_form(L);
        SurjectionMap rho = synth_surjection(K, d, m, ClopenRegion::whole());
        return Verdict::yes("(ii): synthesized surjection onto the normal form",
                            surj_to_json(rho));
      } catch (const std::runtime_error&) {
        return Verdict::no("(ii): no region of K supplies the required derived set");
      }
    }
    return Verdict::unknown_v("(ii): not refuted, no constructive synthesis available");
  }

  throw std::invalid_argument("unknown condition: " + cond);
}

// Disjoint single-atom kernel regions for the order=infinity witness.
namespace detail {

inline void collect_cantor_regions(const SpaceP& s, size_t want,
                                   std::vector<ClopenRegion>& out) {
  if (out.size() >= want) return;
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Space::CantorA>) {
          out.push_back(ClopenRegion::whole());
        } else if constexpr (std::is_same_v<T, Space::SumN>) {
          for (size_t i = 0; i < n.parts.size() && out.size() < want; ++i) {
            std::vector<ClopenRegion> sub;
            collect_cantor_regions(n.parts[i], want - out.size(), sub);
            for (auto& r : sub)
              out.push_back(ClopenRegion::sum_select({{i, std::move(r)}}));
          }
        } else if constexpr (std::is_same_v<T, Space::OnePointN>) {
          for (long long c = 1; out.size() < want; ++c) {
            SpaceP mem = member_space(n, c);
            if (scattered(mem)) break;  // uniform members repeat; ramps are scattered
            std::vector<ClopenRegion> sub;
            collect_cantor_regions(mem, want - out.size(), sub);
            if (sub.empty()) break;
            for (auto& r : sub)
              out.push_back(ClopenRegion::onepoint_select({{c, std::move(r)}}, false));
            if (!std::holds_alternative<Space::Uniform>(n.family)) break;
          }
        }
      },
      s->node);
}

}  // namespace detail

// One embedding certificate per disjoint kernel region; throws when fewer
// than n Cantor atoms exist.
inline std::vector<Operator> cantor_witness_operators(const SpaceP& K, long long n) {
  if (!constructive(K)) throw NotConstructive();
  if (!zero_dimensional(K)) throw NotZeroDimensional();
  SpaceP Kt = canonical_tree(K);
  std::vector<ClopenRegion> regions;
  detail::collect_cantor_regions(Kt, (size_t)n, regions);
  if ((long long)regions.size() < n) throw InsufficientCellularity();
  std::vector<Operator> out;
  for (long long i = 0; i < n; ++i) out.push_back(synth_cantor_embedding(K, regions[i]));
  return out;
}

struct CellularityBound {
  Cardinal value;
  long long witness_max = 0;
};

inline CellularityBound cellularity_bound(const SpaceP& K, const ExtendedOrdinal& order,
                                          long long cap = 4) {
  CellularityBound out{rel_cellularity(K, order), 0};
  if (!constructive(K) || !zero_dimensional(K)) return out;
  long long limit = out.value.is_finite() ? out.value.value() : cap;
  for (long long n = 1; n <= limit; ++n) {
    try {
      if (order.is_infinite())
        cantor_witness_operators(K, n);
      else
        synth_onepoint_embedding(K, n, order.finite());
      out.witness_max = n;
    } catch (const InsufficientCellularity&) {
      break;
    }
  }
  return out;
}

}  // namespace ck

#endif

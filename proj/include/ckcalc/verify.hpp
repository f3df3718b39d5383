#ifndef CKCALC_VERIFY_HPP
#define CKCALC_VERIFY_HPP

#include <random>

#include "decide.hpp"

namespace ck {

struct TrialConfig {
  std::uint64_t seed = 0;
  long long trials = 100;
  int max_depth = 3;
  int max_children = 3;
  long long max_coeff = 4;
  std::set<std::string> checks = {"linear", "isometry", "pnpp", "positive", "support"};
};

inline std::set<std::string> default_checks(const Operator& T) {
  std::set<std::string> c = {"linear", "isometry", "pnpp", "positive", "support"};
  if (std::holds_alternative<Operator::Compose>(T.node().v)) {
    c.insert("lattice");
    c.insert("algebra");
  }
  return c;
}

struct Report {
  std::map<std::string, std::pair<long long, long long>> counts;  // check -> (pass, fail)
  nlohmann::json first_counterexample;  // null when everything passed

  bool all_pass() const {
    for (const auto& [k, pf] : counts)
      if (pf.second > 0) return false;
    return true;
  }
  void record(const std::string& check, bool ok, long long trial,
              const nlohmann::json& inputs) {
    auto& pf = counts[check];
    if (ok) {
      ++pf.first;
    } else {
      ++pf.second;
      if (first_counterexample.is_null())
        first_counterexample = {{"check", check}, {"trial", trial}, {"inputs", inputs}};
    }
  }
};

// --- random generators -------------------------------------------------------

namespace detail {

inline long long pick(std::mt19937_64& rng, long long lo, long long hi) {
  return lo + (long long)(rng() % (std::uint64_t)(hi - lo + 1));
}

}  // namespace detail

inline Ordinal random_small_ordinal(std::mt19937_64& rng, int depth) {
  if (depth <= 0) return Ordinal::from_nat(detail::pick(rng, 0, 3));
  size_t k = (size_t)detail::pick(rng, 1, 2);
  std::vector<std::pair<Ordinal, long long>> ts;
  for (size_t i = 0; i < k; ++i)
    ts.push_back({random_small_ordinal(rng, depth - 1), detail::pick(rng, 1, 3)});
  return Ordinal::make(ts);
}

// Constructive zero-dimensional spaces within the size bounds.
inline SpaceP random_space(std::mt19937_64& rng, const TrialConfig& cfg, int depth = -1) {
  if (depth < 0) depth = cfg.max_depth;
  long long roll = depth <= 0 ? 0 : detail::pick(rng, 0, 9);
  if (roll <= 1) return space_fin(detail::pick(rng, 1, 3));
  if (roll == 2) return space_cantor();
  if (roll == 3) return space_interval(random_small_ordinal(rng, 1), detail::pick(rng, 1, 2));
  if (roll <= 6) {
    std::vector<SpaceP> parts;
    long long k = detail::pick(rng, 1, cfg.max_children);
    for (long long i = 0; i < k; ++i) parts.push_back(random_space(rng, cfg, depth - 1));
    return space_sum(std::move(parts));
  }
  if (roll <= 8) return space_onepoint(random_space(rng, cfg, depth - 1));
  Ordinal a = mul_nat(omega_pow(Ordinal::from_nat(1)), detail::pick(rng, 1, 2));
  if (detail::pick(rng, 0, 1) == 0) a = omega_pow(a);  // w^(w*k) is also a limit
  return space_opramp(a);
}

inline FunctionRep random_function(std::mt19937_64& rng, const SpaceP& s,
                                   const TrialConfig& cfg, int depth = 0) {
  auto coeff = [&] { return Rational(detail::pick(rng, -cfg.max_coeff, cfg.max_coeff)); };
  if (depth > cfg.max_depth + 3) return const_fn(s, coeff());
  return std::visit(
      [&](const auto& n) -> FunctionRep {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Space::Fin>) {
          std::vector<Rational> v;
          for (long long i = 0; i < n.n; ++i) v.push_back(coeff());
          return FunctionRep::leaf(std::move(v));
        } else if constexpr (std::is_same_v<T, Space::SumN>) {
          std::vector<FunctionRep> parts;
          for (const auto& p : n.parts) parts.push_back(random_function(rng, p, cfg, depth + 1));
          return FunctionRep::sum(std::move(parts));
        } else if constexpr (std::is_same_v<T, Space::OnePointN>) {
          Rational tail = coeff();
          std::map<long long, FunctionRep> ch;
          long long k = detail::pick(rng, 0, cfg.max_children);
          for (long long i = 0; i < k; ++i) {
            long long c = detail::pick(rng, 1, cfg.max_children + 1);
            ch.emplace(c, random_function(rng, member_space(n, c), cfg, depth + 1));
          }
          return FunctionRep::onepoint(tail, std::move(ch));
        } else if constexpr (std::is_same_v<T, Space::CantorA>) {
          int d = (int)detail::pick(rng, 1, 2);
          std::vector<Rational> v;
          for (int i = 0; i < (1 << d); ++i) v.push_back(coeff());
          return FunctionRep::cantor(d, std::move(v));
        } else {
          return const_fn(s, coeff());
        }
      },
      s->node);
}

inline Point random_point(std::mt19937_64& rng, const SpaceP& s, const TrialConfig& cfg) {
  return std::visit(
      [&](const auto& n) -> Point {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Space::Fin>) {
          return Point::of(Point::LeafIndex{detail::pick(rng, 1, n.n)});
        } else if constexpr (std::is_same_v<T, Space::Interval>) {
          SpaceP t = canonical_tree(s);
          Point q = random_point(rng, t, cfg);
          return Point::of(Point::OrdinalPoint{tree_point_to_ordinal(n.alpha, n.m, q)});
        } else if constexpr (std::is_same_v<T, Space::CantorA>) {
          std::string bits;
          long long k = detail::pick(rng, 0, 4);
          for (long long i = 0; i < k; ++i) bits += char('0' + detail::pick(rng, 0, 1));
          return Point::of(Point::CantorPrefix{bits, true});
        } else if constexpr (std::is_same_v<T, Space::SumN>) {
          size_t i = (size_t)detail::pick(rng, 0, (long long)n.parts.size() - 1);
          return random_point(rng, n.parts[i], cfg).prepend(Point::SumBranch{i});
        } else if constexpr (std::is_same_v<T, Space::OnePointN>) {
          if (detail::pick(rng, 0, 3) == 0) return Point::of(Point::AtInfinity{});
          long long c = detail::pick(rng, 1, cfg.max_children + 1);
          return random_point(rng, member_space(n, c), cfg).prepend(Point::CopyIndex{c});
        } else {
          throw InvalidPoint("random_point needs a constructive zero-dimensional space");
        }
      },
      s->node);
}

// --- property checks ---------------------------------------------------------

inline Report run_checks(const Operator& T, const TrialConfig& cfg) {
  Report rep;
  std::mt19937_64 rng(cfg.seed);
  const SpaceP& L = T.domain();
  const SpaceP& K = T.codomain();
  ClopenRegion supp = support_of(T);
  for (long long t = 0; t < cfg.trials; ++t) {
    FunctionRep f = random_function(rng, L, cfg);
    FunctionRep g = random_function(rng, L, cfg);
    Rational c(detail::pick(rng, -cfg.max_coeff, cfg.max_coeff));
    nlohmann::json inputs = {{"f", fn_to_json(f)}, {"g", fn_to_json(g)}, {"c", c.str()}};
    FunctionRep Tf = apply(T, f);
    FunctionRep Tg = apply(T, g);
    if (cfg.checks.count("linear")) {
      bool ok = fn_eq(K, apply(T, add(L, f, g)), add(K, Tf, Tg)) &&
                fn_eq(K, apply(T, scale(L, f, c)), scale(K, Tf, c));
      rep.record("linear", ok, t, inputs);
    }
    if (cfg.checks.count("isometry")) rep.record("isometry", norm(f) == norm(Tf), t, inputs);
    if (cfg.checks.count("pnpp"))
      rep.record("pnpp", norm_pos(f) == norm_pos(Tf), t, inputs);
    if (cfg.checks.count("positive")) {
      FunctionRep fp = pos_part(L, f);
      rep.record("positive", !(min_val(apply(T, fp)) < Rational(0)), t, inputs);
    }
    if (cfg.checks.count("support"))
      rep.record("support", is_supported_by(K, Tf, supp), t, inputs);
    if (cfg.checks.count("lattice")) {
      bool ok = fn_eq(K, apply(T, pointwise_max(L, f, g)), pointwise_max(K, Tf, Tg)) &&
                fn_eq(K, apply(T, pointwise_min(L, f, g)), pointwise_min(K, Tf, Tg));
      rep.record("lattice", ok, t, inputs);
    }
    if (cfg.checks.count("algebra"))
      rep.record("algebra", fn_eq(K, apply(T, mul(L, f, g)), mul(K, Tf, Tg)), t, inputs);
  }
  return rep;
}

// Cross-validates the pointwise derivative-membership rule against the
// closed-form derived space: members must transfer to valid points of
// derived(S, beta), nonmembers must be consistent with iterated single
// derivatives and the cardinality of the derivative.
inline Report oracle_derived_membership(const SpaceP& S, const Ordinal& beta,
                                        long long samples, std::uint64_t seed) {
  Report rep;
  TrialConfig cfg;
  cfg.seed = seed;
  std::mt19937_64 rng(seed);
  SpaceP D = derived(S, beta);
  for (long long t = 0; t < samples; ++t) {
    Point p = random_point(rng, S, cfg);
    nlohmann::json inputs = {{"space", print(S)}, {"beta", print(beta)},
                             {"point", point_to_json(p)}};
    bool member = in_derived(S, beta, p);
    rep.record("level0", in_derived(S, Ordinal(), p) == valid_point(S, p), t, inputs);
    if (member) {
      bool ok = false;
      try {
        ok = valid_point(D, to_derived_point(S, beta, p));
      } catch (const std::exception&) {
      }
      rep.record("transfer", ok, t, inputs);
      rep.record("cardinality", derived_card(S, beta) != Cardinal::finite(0), t, inputs);
    } else if (auto bn = beta.as_nat(); bn && *bn > 0) {
      // iterate one step at a time; some step must reject
      SpaceP cur = S;
      Point q = p;
      bool rejected = false;
      Ordinal one = Ordinal::from_nat(1);
      for (long long i = 0; i < *bn; ++i) {
        if (!in_derived(cur, one, q)) {
          rejected = true;
          break;
        }
        q = to_derived_point(cur, one, q);
        cur = derived(cur, one);
      }
      rep.record("iterated", rejected, t, inputs);
    }
  }
  return rep;
}

// --- mutant machinery --------------------------------------------------------
//
// Single-field corruptions of a serialized operator. Each mutant must either
// fail to deserialize (construction-time validation) or fail a check.

inline std::vector<std::pair<std::string, nlohmann::json>> operator_mutants(
    const nlohmann::json& j) {
  std::vector<std::pair<std::string, nlohmann::json>> out;
  const nlohmann::json& node = j["op"];
  if (node.contains("cells") && node["cells"].size() >= 1) {
    nlohmann::json m = j;
    m["op"]["cells"].erase(m["op"]["cells"].size() - 1);
    out.push_back({"cell-drop", m});
    if (node["cells"].size() >= 2) {
      nlohmann::json sw = j;
      std::swap(sw["op"]["cells"][0], sw["op"]["cells"][1]);
      out.push_back({"cell-swap", sw});
    }
    nlohmann::json dup = j;
    dup["op"]["cells"].push_back(dup["op"]["cells"][0]);
    out.push_back({"cell-duplicate", dup});
  }
  if (node.contains("blocks") && node["blocks"].size() >= 2) {
    nlohmann::json m = j;
    m["op"]["blocks"].erase(m["op"]["blocks"].size() - 1);
    out.push_back({"block-drop", m});
    nlohmann::json sw = j;
    std::swap(sw["op"]["blocks"][0]["region"], sw["op"]["blocks"][1]["region"]);
    out.push_back({"block-region-swap", sw});
  }
  if (node.contains("glue")) {
    if (!node["glue"]["parts"].empty()) {
      nlohmann::json m = j;
      m["op"]["glue"]["parts"].erase(m["op"]["glue"]["parts"].begin().key());
      out.push_back({"glue-part-drop", m});
      nlohmann::json grow = j;
      grow["op"]["glue"]["h"] = grow["op"]["glue"]["parts"].begin().value()["region"];
      out.push_back({"glue-h-shrink", grow});
    }
  }
  if (node.contains("compose")) {
    const auto& rho = node["compose"]["rho"]["map"];
    if (rho.contains("route") && !rho["route"]["parts"].empty()) {
      nlohmann::json m = j;
      auto& parts = m["op"]["compose"]["rho"]["map"]["route"]["parts"];
      parts.erase(parts.begin().key());
      out.push_back({"route-part-drop", m});
    }
  }
  return out;
}

struct MutantOutcome {
  std::string name;
  bool caught = false;
  std::string how;  // "construction" or the failing check
};

inline std::vector<MutantOutcome> mutant_sensitivity(const Operator& T,
                                                     const TrialConfig& cfg) {
  std::vector<MutantOutcome> out;
  nlohmann::json base = op_to_json(T);
  for (const auto& [name, mj] : operator_mutants(base)) {
    MutantOutcome mo{name, false, ""};
    try {
      Operator M = op_from_json(mj);
      TrialConfig c = cfg;
      c.checks = default_checks(T);
      Report rep = run_checks(M, c);
      if (!rep.all_pass()) {
        mo.caught = true;
        mo.how = rep.first_counterexample["check"].get<std::string>();
      }
    } catch (const std::exception& e) {
      mo.caught = true;
      mo.how = "construction";
    }
    out.push_back(std::move(mo));
  }
  return out;
}

}  // namespace ck

#endif

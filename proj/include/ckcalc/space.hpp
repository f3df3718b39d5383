#ifndef CKCALC_SPACE_HPP
#define CKCALC_SPACE_HPP

#include <algorithm>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "cardinal.hpp"
#include "ordinal.hpp"

namespace ck {

struct NotScattered : std::runtime_error {
  NotScattered() : std::runtime_error("space is not scattered") {}
};
struct NotCountableCompact : std::runtime_error {
  NotCountableCompact() : std::runtime_error("space is not a countable compact space") {}
};
struct NotConstructive : std::runtime_error {
  NotConstructive() : std::runtime_error("space is not constructive") {}
};
struct HeightBeyondScale : std::runtime_error {
  HeightBeyondScale() : std::runtime_error("height exceeds the representable ordinal scale") {}
};
struct SpaceSyntaxError : std::runtime_error {
  SpaceSyntaxError(const std::string& msg, size_t col)
      : std::runtime_error("space syntax error at column " + std::to_string(col) + ": " + msg),
        column(col) {}
  size_t column;
};

// Derivative order on a scale that can exceed representable ordinals:
// every representable ordinal < AtomTop < Inf. AtomTop stands for the
// top derivative level (ht-1) of a symbolic atom whose height lies beyond
// epsilon_0.
struct Level {
  enum Kind { Ord, AtomTop, Inf } kind = Ord;
  Ordinal ord;

  static Level of(Ordinal o) { return {Ord, std::move(o)}; }
  static Level atom_top() { return {AtomTop, Ordinal()}; }
  static Level inf() { return {Inf, Ordinal()}; }

  friend bool operator==(const Level& a, const Level& b) {
    if (a.kind != b.kind) return false;
    return a.kind != Ord || a.ord == b.ord;
  }
  friend bool operator<(const Level& a, const Level& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.kind == Ord && a.ord < b.ord;
  }
  friend bool operator<=(const Level& a, const Level& b) { return a < b || a == b; }

  std::string str() const {
    switch (kind) {
      case Ord: return print(ord);
      case AtomTop: return "atom-top";
      default: return "infinity";
    }
  }
};

// Declared invariants of a nonconstructive exemplar space: piecewise-constant
// cardinality and relative-cellularity profiles over derivative levels.
struct CardinalProfile {
  bool scattered = false;
  bool height_representable = false;
  ExtendedOrdinal height;  // valid when representable (infinity for nonscattered)
  std::vector<std::pair<Level, Cardinal>> derived_card;
  std::vector<std::pair<Level, Cardinal>> cellularity_at;
  Cardinal kernel_card = Cardinal::finite(0);
  Cardinal kernel_cellularity = Cardinal::finite(0);
  bool metrizable = false;
  bool zero_dimensional = false;
  bool hereditarily_ccc = false;
};

inline Cardinal profile_step_at(const std::vector<std::pair<Level, Cardinal>>& steps,
                                const Level& level) {
  Cardinal v = Cardinal::finite(0);
  for (const auto& [bp, c] : steps)
    if (bp <= level) v = c;
  return v;
}

enum class IndexSize { Aleph0, Aleph1, Continuum };

inline Cardinal index_card(IndexSize s) {
  switch (s) {
    case IndexSize::Aleph0: return Cardinal::aleph0();
    case IndexSize::Aleph1: return Cardinal::aleph1();
    default: return Cardinal::continuum();
  }
}

struct Space;
using SpaceP = std::shared_ptr<const Space>;

// Grammar term denoting a compact Hausdorff space. Constructive atoms plus
// decision-only symbolic atoms; Empty is an explicit marker (FiniteDiscrete
// requires n >= 1).
struct Space {
  struct EmptyS {};
  struct Fin { long long n; };                 // discrete {1..n}
  struct Interval { Ordinal alpha; long long m; };  // [1, w^alpha * m]
  struct CantorA {};
  struct UnitA {};
  struct SumN { std::vector<SpaceP> parts; };
  struct Uniform { SpaceP member; };
  struct Ramp {
    Ordinal alpha;  // family {[1, w^(fund_seq(alpha,n))]}_n, alpha limit
    // member trees are pure functions of alpha and n; memoized for reuse
    mutable std::map<long long, SpaceP> member_cache;
  };
  struct OnePointN { IndexSize index; std::variant<Uniform, Ramp> family; };
  struct Atom { std::string name; CardinalProfile profile; Ordinal shift; };

  std::variant<EmptyS, Fin, Interval, CantorA, UnitA, SumN, OnePointN, Atom> node;
};

inline SpaceP space_empty() { return std::make_shared<Space>(Space{Space::EmptyS{}}); }
inline SpaceP space_fin(long long n) {
  if (n < 1) throw std::invalid_argument("fin(n) requires n >= 1");
  return std::make_shared<Space>(Space{Space::Fin{n}});
}
inline SpaceP space_interval(Ordinal alpha, long long m) {
  if (m < 1) throw std::invalid_argument("I(alpha,m) requires m >= 1");
  return std::make_shared<Space>(Space{Space::Interval{std::move(alpha), m}});
}
inline SpaceP space_cantor() { return std::make_shared<Space>(Space{Space::CantorA{}}); }
inline SpaceP space_unit() { return std::make_shared<Space>(Space{Space::UnitA{}}); }
inline SpaceP space_sum(std::vector<SpaceP> parts) {
  if (parts.empty()) throw std::invalid_argument("sum requires at least one part");
  return std::make_shared<Space>(Space{Space::SumN{std::move(parts)}});
}
inline SpaceP space_onepoint(SpaceP member, IndexSize idx = IndexSize::Aleph0) {
  return std::make_shared<Space>(
      Space{Space::OnePointN{idx, Space::Uniform{std::move(member)}}});
}
inline SpaceP space_opramp(Ordinal alpha) {
  if (!is_limit(alpha)) throw std::invalid_argument("opramp requires a limit ordinal");
  return std::make_shared<Space>(
      Space{Space::OnePointN{IndexSize::Aleph0, Space::Ramp{std::move(alpha)}}});
}
inline SpaceP space_atom(std::string name, CardinalProfile profile,
                         Ordinal shift = Ordinal()) {
  return std::make_shared<Space>(
      Space{Space::Atom{std::move(name), std::move(profile), std::move(shift)}});
}

inline bool is_empty_space(const SpaceP& s) {
  return std::holds_alternative<Space::EmptyS>(s->node);
}

// --- built-in symbolic atoms -------------------------------------------------

inline const std::map<std::string, CardinalProfile>& builtin_atoms() {
  static const std::map<std::string, CardinalProfile> atoms = [] {
    std::map<std::string, CardinalProfile> m;
    {
      // [1, omega_1]: scattered, height omega_1 + 1 (beyond scale),
      // |S^(b)| = aleph1 below the top, one point at the top; cellularity
      // aleph1 (fails ccc).
      CardinalProfile p;
      p.scattered = true;
      p.height_representable = false;
      p.derived_card = {{Level::of(Ordinal()), Cardinal::aleph1()},
                        {Level::atom_top(), Cardinal::finite(1)}};
      p.cellularity_at = {{Level::of(Ordinal()), Cardinal::aleph1()},
                          {Level::atom_top(), Cardinal::finite(1)}};
      m["[1,omega1]"] = p;
    }
    {
      // beta N minus N: perfect, every derivative has cardinality 2^c,
      // cellularity 2^c.
      CardinalProfile p;
      p.scattered = false;
      p.height_representable = true;
      p.height = ExtendedOrdinal::infinity();
      p.derived_card = {{Level::of(Ordinal()), Cardinal::two_to_continuum()}};
      p.cellularity_at = {{Level::of(Ordinal()), Cardinal::two_to_continuum()}};
      p.kernel_card = Cardinal::two_to_continuum();
      p.kernel_cellularity = Cardinal::two_to_continuum();
      p.zero_dimensional = true;
      m["bN_minus_N"] = p;
    }
    {
      // [0,1]^(omega_1): perfect and ccc. Its cardinality 2^(aleph1) has no
      // exact spot on the five-point scale; stored as 2^c (flagged
      // approximation, see the space-module notes).
      CardinalProfile p;
      p.scattered = false;
      p.height_representable = true;
      p.height = ExtendedOrdinal::infinity();
      p.derived_card = {{Level::of(Ordinal()), Cardinal::two_to_continuum()}};
      p.cellularity_at = {{Level::of(Ordinal()), Cardinal::aleph0()}};
      p.kernel_card = Cardinal::two_to_continuum();
      p.kernel_cellularity = Cardinal::aleph0();
      m["cube_omega1"] = p;
    }
    {
      // [1, 2^c] as an ordinal interval: scattered, huge height, a single
      // point at the top; |S| = 2^c.
      CardinalProfile p;
      p.scattered = true;
      p.height_representable = false;
      p.derived_card = {{Level::of(Ordinal()), Cardinal::two_to_continuum()},
                        {Level::atom_top(), Cardinal::finite(1)}};
      p.cellularity_at = {{Level::of(Ordinal()), Cardinal::two_to_continuum()},
                          {Level::atom_top(), Cardinal::finite(1)}};
      m["[1,2^c]"] = p;
    }
    return m;
  }();
  return atoms;
}

inline SpaceP space_atom(const std::string& name) {
  auto it = builtin_atoms().find(name);
  if (it == builtin_atoms().end())
    throw std::invalid_argument("unknown symbolic atom: " + name);
  return space_atom(name, it->second);
}

// --- predicates --------------------------------------------------------------

inline bool constructive(const SpaceP& s) {
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Space::Atom>) return false;
        else if constexpr (std::is_same_v<T, Space::SumN>) {
          for (const auto& p : n.parts)
            if (!constructive(p)) return false;
          return true;
        } else if constexpr (std::is_same_v<T, Space::OnePointN>) {
          if (n.index != IndexSize::Aleph0) return false;
          if (const auto* u = std::get_if<Space::Uniform>(&n.family))
            return constructive(u->member);
          return true;
        } else
          return true;
      },
      s->node);
}

inline bool zero_dimensional(const SpaceP& s) {
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Space::UnitA>) return false;
        else if constexpr (std::is_same_v<T, Space::Atom>) return n.profile.zero_dimensional;
        else if constexpr (std::is_same_v<T, Space::SumN>) {
          for (const auto& p : n.parts)
            if (!zero_dimensional(p)) return false;
          return true;
        } else if constexpr (std::is_same_v<T, Space::OnePointN>) {
          if (const auto* u = std::get_if<Space::Uniform>(&n.family))
            return zero_dimensional(u->member);
          return true;
        } else
          return true;
      },
      s->node);
}

inline bool metrizable(const SpaceP& s) {
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Space::Atom>) return n.profile.metrizable;
        else if constexpr (std::is_same_v<T, Space::SumN>) {
          for (const auto& p : n.parts)
            if (!metrizable(p)) return false;
          return true;
        } else if constexpr (std::is_same_v<T, Space::OnePointN>) {
          if (n.index != IndexSize::Aleph0) return false;
          if (const auto* u = std::get_if<Space::Uniform>(&n.family))
            return metrizable(u->member);
          return true;
        } else
          return true;
      },
      s->node);
}

inline bool scattered(const SpaceP& s) {
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Space::CantorA> || std::is_same_v<T, Space::UnitA>)
          return false;
        else if constexpr (std::is_same_v<T, Space::Atom>) return n.profile.scattered;
        else if constexpr (std::is_same_v<T, Space::SumN>) {
          for (const auto& p : n.parts)
            if (!scattered(p)) return false;
          return true;
        } else if constexpr (std::is_same_v<T, Space::OnePointN>) {
          if (const auto* u = std::get_if<Space::Uniform>(&n.family))
            return scattered(u->member);
          return true;
        } else
          return true;
      },
      s->node);
}

// --- height ------------------------------------------------------------------

struct HeightInfo {
  enum Kind { Representable, BeyondScale, Infinite } kind = Representable;
  Ordinal value;  // valid for Representable

  static HeightInfo repr(Ordinal o) { return {Representable, std::move(o)}; }
  static HeightInfo beyond() { return {BeyondScale, Ordinal()}; }
  static HeightInfo infinite() { return {Infinite, Ordinal()}; }
};

inline HeightInfo height_info(const SpaceP& s) {
  return std::visit(
      [&](const auto& n) -> HeightInfo {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Space::EmptyS>)
          return HeightInfo::repr(Ordinal());
        else if constexpr (std::is_same_v<T, Space::Fin>)
          return HeightInfo::repr(Ordinal::from_nat(1));
        else if constexpr (std::is_same_v<T, Space::Interval>)
          return HeightInfo::repr(succ(n.alpha));
        else if constexpr (std::is_same_v<T, Space::CantorA> || std::is_same_v<T, Space::UnitA>)
          return HeightInfo::infinite();
        else if constexpr (std::is_same_v<T, Space::SumN>) {
          HeightInfo best = HeightInfo::repr(Ordinal());
          for (const auto& p : n.parts) {
            HeightInfo h = height_info(p);
            if (h.kind > best.kind || (h.kind == best.kind && h.kind == HeightInfo::Representable &&
                                       best.value < h.value))
              best = h;
          }
          return best;
        } else if constexpr (std::is_same_v<T, Space::OnePointN>) {
          if (const auto* r = std::get_if<Space::Ramp>(&n.family))
            return HeightInfo::repr(succ(r->alpha));
          HeightInfo h = height_info(std::get<Space::Uniform>(n.family).member);
          if (h.kind == HeightInfo::Representable) h.value = succ(h.value);
          return h;
        } else {  // Atom
          if (!n.profile.scattered) return HeightInfo::infinite();
          if (!n.profile.height_representable) return HeightInfo::beyond();
          Ordinal h = n.profile.height.finite();
          if (n.shift >= h) return HeightInfo::repr(Ordinal());
          return HeightInfo::repr(left_subtract(n.shift, h));
        }
      },
      s->node);
}

// Least alpha with S^(alpha) empty; infinity for nonscattered S. Throws when
// the exact value lies beyond the representable scale.
inline ExtendedOrdinal height(const SpaceP& s) {
  HeightInfo h = height_info(s);
  switch (h.kind) {
    case HeightInfo::Representable: return ExtendedOrdinal(h.value);
    case HeightInfo::Infinite: return ExtendedOrdinal::infinity();
    default: throw HeightBeyondScale();
  }
}

// --- Cantor-Bendixson derivative (closed form on the grammar) ----------------

inline SpaceP normalize_sum(std::vector<SpaceP> parts) {
  std::vector<SpaceP> alive;
  for (auto& p : parts)
    if (!is_empty_space(p)) alive.push_back(p);
  if (alive.empty()) return space_empty();
  if (alive.size() == 1) return alive[0];
  return space_sum(std::move(alive));
}

inline SpaceP derived(const SpaceP& s, const Ordinal& beta);

inline SpaceP derived_interval(const Ordinal& alpha, long long m, const Ordinal& beta) {
  if (beta > alpha) return space_empty();
  Ordinal rest = left_subtract(beta, alpha);
  if (rest.is_zero()) return space_fin(m);
  return space_interval(rest, m);
}

inline SpaceP derived(const SpaceP& s, const Ordinal& beta) {
  if (beta.is_zero()) return s;
  return std::visit(
      [&](const auto& n) -> SpaceP {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Space::EmptyS>)
          return space_empty();
        else if constexpr (std::is_same_v<T, Space::Fin>)
          return space_empty();
        else if constexpr (std::is_same_v<T, Space::Interval>)
          return derived_interval(n.alpha, n.m, beta);
        else if constexpr (std::is_same_v<T, Space::CantorA> || std::is_same_v<T, Space::UnitA>)
          return s;
        else if constexpr (std::is_same_v<T, Space::SumN>) {
          std::vector<SpaceP> parts;
          for (const auto& p : n.parts) parts.push_back(derived(p, beta));
          return normalize_sum(std::move(parts));
        } else if constexpr (std::is_same_v<T, Space::OnePointN>) {
          if (const auto* r = std::get_if<Space::Ramp>(&n.family))
            return derived_interval(r->alpha, 1, beta);
          const SpaceP& member = std::get<Space::Uniform>(n.family).member;
          SpaceP dm = derived(member, beta);
          if (!is_empty_space(dm)) return space_onepoint(dm, n.index);
          // only the compactifying point may survive
          HeightInfo h = height_info(member);
          if (h.kind == HeightInfo::Representable && beta > h.value) return space_empty();
          return space_fin(1);
        } else {  // Atom: shift the declared profile
          return space_atom(n.name, n.profile, add(n.shift, beta));
        }
      },
      s->node);
}

inline SpaceP perfect_kernel(const SpaceP& s) {
  return std::visit(
      [&](const auto& n) -> SpaceP {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Space::CantorA> || std::is_same_v<T, Space::UnitA>)
          return s;
        else if constexpr (std::is_same_v<T, Space::SumN>) {
          std::vector<SpaceP> parts;
          for (const auto& p : n.parts) parts.push_back(perfect_kernel(p));
          return normalize_sum(std::move(parts));
        } else if constexpr (std::is_same_v<T, Space::OnePointN>) {
          if (std::holds_alternative<Space::Ramp>(n.family)) return space_empty();
          SpaceP km = perfect_kernel(std::get<Space::Uniform>(n.family).member);
          if (is_empty_space(km)) return space_empty();
          return space_onepoint(km, n.index);
        } else if constexpr (std::is_same_v<T, Space::Atom>) {
          return n.profile.scattered ? space_empty() : s;
        } else {
          return space_empty();
        }
      },
      s->node);
}

// --- cardinality profiles ----------------------------------------------------

inline Cardinal atom_profile_card(const Space::Atom& a, const Level& level) {
  if (level.kind == Level::Inf) return a.profile.kernel_card;
  Level q = level;
  if (q.kind == Level::Ord) {
    q.ord = add(a.shift, q.ord);
    if (a.profile.scattered && a.profile.height_representable &&
        ExtendedOrdinal(q.ord) >= a.profile.height)
      return Cardinal::finite(0);
  }
  return profile_step_at(a.profile.derived_card, q);
}

inline Cardinal atom_profile_cell(const Space::Atom& a, const Level& level) {
  if (level.kind == Level::Inf) return a.profile.kernel_cellularity;
  Level q = level;
  if (q.kind == Level::Ord) {
    q.ord = add(a.shift, q.ord);
    if (a.profile.scattered && a.profile.height_representable &&
        ExtendedOrdinal(q.ord) >= a.profile.height)
      return Cardinal::finite(0);
  }
  return profile_step_at(a.profile.cellularity_at, q);
}

// |S^(level)| on the symbolic cardinal scale.
inline Cardinal derived_card_level(const SpaceP& s, const Level& level) {
  return std::visit(
      [&](const auto& n) -> Cardinal {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Space::EmptyS>)
          return Cardinal::finite(0);
        else if constexpr (std::is_same_v<T, Space::Fin>)
          return level == Level::of(Ordinal()) ? Cardinal::finite(n.n) : Cardinal::finite(0);
        else if constexpr (std::is_same_v<T, Space::Interval>) {
          if (level.kind != Level::Ord) return Cardinal::finite(0);
          if (level.ord > n.alpha) return Cardinal::finite(0);
          if (level.ord == n.alpha) return Cardinal::finite(n.m);
          return Cardinal::aleph0();
        } else if constexpr (std::is_same_v<T, Space::CantorA> || std::is_same_v<T, Space::UnitA>)
          return Cardinal::continuum();
        else if constexpr (std::is_same_v<T, Space::SumN>) {
          Cardinal c = Cardinal::finite(0);
          for (const auto& p : n.parts) c = card_sum(c, derived_card_level(p, level));
          return c;
        } else if constexpr (std::is_same_v<T, Space::OnePointN>) {
          if (const auto* r = std::get_if<Space::Ramp>(&n.family)) {
            if (level.kind != Level::Ord) return Cardinal::finite(0);
            if (level.ord > r->alpha) return Cardinal::finite(0);
            if (level.ord == r->alpha) return Cardinal::finite(1);
            return Cardinal::aleph0();
          }
          const SpaceP& member = std::get<Space::Uniform>(n.family).member;
          Cardinal dm = derived_card_level(member, level);
          if (!(dm == Cardinal::finite(0)))
            return card_sum(card_mul(index_card(n.index), dm), Cardinal::finite(1));
          // does the compactifying point survive at this level?
          HeightInfo h = height_info(member);
          bool inf_alive;
          if (level.kind == Level::Inf || level.kind == Level::AtomTop)
            inf_alive = h.kind != HeightInfo::Representable;
          else
            inf_alive = h.kind != HeightInfo::Representable || level.ord <= h.value;
          return inf_alive ? Cardinal::finite(1) : Cardinal::finite(0);
        } else {  // Atom
          return atom_profile_card(n, level);
        }
      },
      s->node);
}

inline Cardinal card_of(const SpaceP& s) { return derived_card_level(s, Level::of(Ordinal())); }
inline Cardinal derived_card(const SpaceP& s, const Ordinal& beta) {
  return derived_card_level(s, Level::of(beta));
}

inline Level top_level(const SpaceP& s) {
  HeightInfo h = height_info(s);
  if (h.kind == HeightInfo::Infinite) throw NotScattered();
  if (h.kind == HeightInfo::BeyondScale) return Level::atom_top();
  if (h.value.is_zero()) throw std::invalid_argument("empty space has no top level");
  OrdinalClass c = classify(h.value);
  if (c.kind != OrdinalClass::Successor)
    throw std::logic_error("scattered compact height must be a successor");
  return Level::of(c.pred);
}

// |S^(ht(S)-1)|, finite for scattered compact S.
inline Cardinal top_card(const SpaceP& s) {
  if (!scattered(s)) throw NotScattered();
  return derived_card_level(s, top_level(s));
}

// Mazurkiewicz-Sierpinski normal form: S homeomorphic to [1, w^alpha * m].
inline std::pair<Ordinal, long long> ms_normal_form(const SpaceP& s) {
  if (!constructive(s) || !scattered(s) || is_empty_space(s)) throw NotCountableCompact();
  ExtendedOrdinal h = height(s);
  OrdinalClass c = classify(h.finite());
  Cardinal m = top_card(s);
  if (!m.is_finite()) throw NotCountableCompact();
  return {c.pred, m.value()};
}

// --- relative cellularity c(S^(level), S) ------------------------------------

inline Cardinal rel_cellularity_level(const SpaceP& s, const Level& level) {
  return std::visit(
      [&](const auto& n) -> Cardinal {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Space::EmptyS>)
          return Cardinal::finite(0);
        else if constexpr (std::is_same_v<T, Space::Fin>)
          return level == Level::of(Ordinal()) ? Cardinal::finite(n.n) : Cardinal::finite(0);
        else if constexpr (std::is_same_v<T, Space::Interval>) {
          if (level.kind != Level::Ord || level.ord > n.alpha) return Cardinal::finite(0);
          if (level.ord == n.alpha) return Cardinal::finite(n.m);
          return Cardinal::aleph0();
        } else if constexpr (std::is_same_v<T, Space::CantorA> || std::is_same_v<T, Space::UnitA>)
          // at the kernel, count perfect components at atom granularity
          return level.kind == Level::Inf ? Cardinal::finite(1) : Cardinal::aleph0();
        else if constexpr (std::is_same_v<T, Space::SumN>) {
          Cardinal c = Cardinal::finite(0);
          for (const auto& p : n.parts) c = card_sum(c, rel_cellularity_level(p, level));
          return c;
        } else if constexpr (std::is_same_v<T, Space::OnePointN>) {
          if (const auto* r = std::get_if<Space::Ramp>(&n.family)) {
            if (level.kind != Level::Ord || level.ord > r->alpha) return Cardinal::finite(0);
            if (level.ord == r->alpha) return Cardinal::finite(1);
            return Cardinal::aleph0();
          }
          const SpaceP& member = std::get<Space::Uniform>(n.family).member;
          if (derived_card_level(s, level) == Cardinal::finite(0)) return Cardinal::finite(0);
          if (derived_card_level(member, level) == Cardinal::finite(0))
            return Cardinal::finite(1);  // only the compactifying point meets the derivative
          return card_max(index_card(n.index), rel_cellularity_level(member, level));
        } else {  // Atom
          return atom_profile_cell(n, level);
        }
      },
      s->node);
}

inline Cardinal rel_cellularity(const SpaceP& s, const ExtendedOrdinal& order) {
  return rel_cellularity_level(s, order.is_infinite() ? Level::inf() : Level::of(order.finite()));
}

// Levels at which the cardinality or cellularity profile of S may change.
inline void collect_breakpoints(const SpaceP& s, std::vector<Level>& out) {
  out.push_back(Level::of(Ordinal()));
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Space::Fin>) {
          out.push_back(Level::of(Ordinal::from_nat(1)));
        } else if constexpr (std::is_same_v<T, Space::Interval>) {
          out.push_back(Level::of(n.alpha));
          out.push_back(Level::of(succ(n.alpha)));
        } else if constexpr (std::is_same_v<T, Space::SumN>) {
          for (const auto& p : n.parts) collect_breakpoints(p, out);
        } else if constexpr (std::is_same_v<T, Space::OnePointN>) {
          if (const auto* r = std::get_if<Space::Ramp>(&n.family)) {
            out.push_back(Level::of(r->alpha));
            out.push_back(Level::of(succ(r->alpha)));
          } else {
            collect_breakpoints(std::get<Space::Uniform>(n.family).member, out);
            HeightInfo h = height_info(std::get<Space::Uniform>(n.family).member);
            if (h.kind == HeightInfo::Representable) {
              out.push_back(Level::of(h.value));
              out.push_back(Level::of(succ(h.value)));
            } else if (h.kind == HeightInfo::BeyondScale) {
              out.push_back(Level::atom_top());
            }
          }
        } else if constexpr (std::is_same_v<T, Space::Atom>) {
          for (const auto& [bp, c] : n.profile.derived_card) {
            (void)c;
            Level q = bp;
            if (q.kind == Level::Ord)
              q.ord = q.ord >= n.shift ? left_subtract(n.shift, q.ord) : Ordinal();
            out.push_back(q);
          }
          if (n.profile.scattered && !n.profile.height_representable)
            out.push_back(Level::atom_top());
        }
      },
      s->node);
}

inline std::vector<Level> card_breakpoints(const SpaceP& s) {
  std::vector<Level> out;
  collect_breakpoints(s, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// An upper bound for c(F^(a), F) over all closed subsets F of S. Metrizable
// pieces are hereditarily ccc.
inline Cardinal hereditary_cellularity_bound(const SpaceP& s) {
  return std::visit(
      [&](const auto& n) -> Cardinal {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Space::SumN>) {
          Cardinal c = Cardinal::finite(0);
          for (const auto& p : n.parts) c = card_sum(c, hereditary_cellularity_bound(p));
          return c;
        } else if constexpr (std::is_same_v<T, Space::OnePointN>) {
          Cardinal inner = Cardinal::aleph0();
          if (const auto* u = std::get_if<Space::Uniform>(&n.family))
            inner = hereditary_cellularity_bound(u->member);
          return card_max(index_card(n.index), inner);
        } else if constexpr (std::is_same_v<T, Space::Atom>) {
          if (n.profile.hereditarily_ccc) return Cardinal::aleph0();
          return card_of(s);
        } else {
          return metrizable(s) ? Cardinal::aleph0() : card_of(s);
        }
      },
      s->node);
}

// --- textual syntax ----------------------------------------------------------

inline std::string print(const SpaceP& s) {
  return std::visit(
      [&](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Space::EmptyS>)
          return "empty";
        else if constexpr (std::is_same_v<T, Space::Fin>)
          return "fin(" + std::to_string(n.n) + ")";
        else if constexpr (std::is_same_v<T, Space::Interval>)
          return "I(" + print(n.alpha) + "," + std::to_string(n.m) + ")";
        else if constexpr (std::is_same_v<T, Space::CantorA>)
          return "cantor";
        else if constexpr (std::is_same_v<T, Space::UnitA>)
          return "unit";
        else if constexpr (std::is_same_v<T, Space::SumN>) {
          std::string out = "sum(";
          for (size_t i = 0; i < n.parts.size(); ++i) {
            if (i) out += ",";
            out += print(n.parts[i]);
          }
          return out + ")";
        } else if constexpr (std::is_same_v<T, Space::OnePointN>) {
          std::string idx = n.index == IndexSize::Aleph0
                                ? "w"
                                : (n.index == IndexSize::Aleph1 ? "aleph1" : "c");
          if (const auto* r = std::get_if<Space::Ramp>(&n.family))
            return "opramp(" + print(r->alpha) + ")";
          return "op(" + idx + "," + print(std::get<Space::Uniform>(n.family).member) + ")";
        } else {  // Atom
          if (n.shift.is_zero()) return n.name;
          return "derived(" + n.name + "," + print(n.shift) + ")";
        }
      },
      s->node);
}

namespace detail {

struct SpaceScanner {
  const std::string& s;
  size_t pos = 0;
  void skip_ws() {
    while (pos < s.size() && isspace((unsigned char)s[pos])) ++pos;
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }
  bool eat(char c) {
    if (peek() == c) { ++pos; return true; }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) throw SpaceSyntaxError(std::string("expected '") + c + "'", pos);
  }
  long long nat() {
    skip_ws();
    if (pos >= s.size() || !isdigit((unsigned char)s[pos]))
      throw SpaceSyntaxError("expected number", pos);
    long long v = 0;
    while (pos < s.size() && isdigit((unsigned char)s[pos])) v = v * 10 + (s[pos++] - '0');
    return v;
  }
  // ordinal expression up to an unbalanced ')' or a top-level ','
  Ordinal ordinal_arg() {
    skip_ws();
    size_t start = pos;
    int depth = 0;
    while (pos < s.size()) {
      char c = s[pos];
      if (c == '(') ++depth;
      else if (c == ')') {
        if (depth == 0) break;
        --depth;
      } else if (c == ',' && depth == 0)
        break;
      ++pos;
    }
    std::string text = s.substr(start, pos - start);
    while (!text.empty() && isspace((unsigned char)text.back())) text.pop_back();
    try {
      return parse_ordinal(text);
    } catch (const OrdinalSyntaxError& e) {
      throw SpaceSyntaxError(e.what(), start + e.position);
    }
  }
  std::string ident() {
    skip_ws();
    size_t start = pos;
    if (pos < s.size() && s[pos] == '[') {
      while (pos < s.size() && s[pos] != ']') ++pos;
      if (pos >= s.size()) throw SpaceSyntaxError("unterminated atom name", start);
      ++pos;
      return s.substr(start, pos - start);
    }
    while (pos < s.size() && (isalnum((unsigned char)s[pos]) || s[pos] == '_' || s[pos] == '^'))
      ++pos;
    if (pos == start) throw SpaceSyntaxError("expected space expression", start);
    return s.substr(start, pos - start);
  }
};

inline SpaceP parse_space_at(SpaceScanner& sc) {
  std::string id = sc.ident();
  if (id == "empty") return space_empty();
  if (id == "cantor") return space_cantor();
  if (id == "unit") return space_unit();
  if (id == "fin") {
    sc.expect('(');
    long long n = sc.nat();
    sc.expect(')');
    return space_fin(n);
  }
  if (id == "I") {
    sc.expect('(');
    Ordinal a = sc.ordinal_arg();
    sc.expect(',');
    long long m = sc.nat();
    sc.expect(')');
    return space_interval(a, m);
  }
  if (id == "sum") {
    sc.expect('(');
    std::vector<SpaceP> parts;
    parts.push_back(parse_space_at(sc));
    while (sc.eat(',')) parts.push_back(parse_space_at(sc));
    sc.expect(')');
    return space_sum(std::move(parts));
  }
  if (id == "op") {
    sc.expect('(');
    std::string idx = sc.ident();
    IndexSize size;
    if (idx == "w") size = IndexSize::Aleph0;
    else if (idx == "aleph1") size = IndexSize::Aleph1;
    else if (idx == "c") size = IndexSize::Continuum;
    else throw SpaceSyntaxError("expected index w, aleph1 or c", sc.pos);
    sc.expect(',');
    SpaceP member = parse_space_at(sc);
    sc.expect(')');
    return space_onepoint(member, size);
  }
  if (id == "opramp") {
    sc.expect('(');
    Ordinal a = sc.ordinal_arg();
    sc.expect(')');
    if (!is_limit(a)) throw SpaceSyntaxError("opramp requires a limit ordinal", sc.pos);
    return space_opramp(a);
  }
  if (id == "derived") {
    sc.expect('(');
    std::string name = sc.ident();
    sc.expect(',');
    Ordinal shift = sc.ordinal_arg();
    sc.expect(')');
    auto it = builtin_atoms().find(name);
    if (it == builtin_atoms().end())
      throw SpaceSyntaxError("unknown symbolic atom: " + name, sc.pos);
    return space_atom(name, it->second, shift);
  }
  auto it = builtin_atoms().find(id);
  if (it != builtin_atoms().end()) return space_atom(id, it->second);
  throw SpaceSyntaxError("unknown space constructor: " + id, sc.pos);
}

}  // namespace detail

inline SpaceP parse_space(const std::string& text) {
  detail::SpaceScanner sc{text};
  SpaceP s = detail::parse_space_at(sc);
  sc.skip_ws();
  if (sc.pos != text.size()) throw SpaceSyntaxError("trailing input", sc.pos);
  return s;
}

inline bool space_eq(const SpaceP& a, const SpaceP& b) { return print(a) == print(b); }

}  // namespace ck

#endif

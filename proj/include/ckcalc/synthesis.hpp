#ifndef CKCALC_SYNTHESIS_HPP
#define CKCALC_SYNTHESIS_HPP

#include "funcalc.hpp"

namespace ck {

struct RegionOverlap : std::runtime_error {
  RegionOverlap() : std::runtime_error("part regions overlap") {}
};
struct ContainmentViolation : std::runtime_error {
  explicit ContainmentViolation(const std::string& msg)
      : std::runtime_error("containment violation: " + msg) {}
};
struct InsufficientHeight : std::runtime_error {
  InsufficientHeight() : std::runtime_error("region height too small for the demanded split") {}
};
struct InsufficientDerivedSet : std::runtime_error {
  InsufficientDerivedSet()
      : std::runtime_error("derived set of the region is too small for the embedding") {}
};
struct NotZeroDimensional : std::runtime_error {
  NotZeroDimensional() : std::runtime_error("synthesis requires a zero-dimensional space") {}
};
struct InsufficientCellularity : std::runtime_error {
  InsufficientCellularity()
      : std::runtime_error("no cellular witness family of the requested size") {}
};
struct KernelEmpty : std::runtime_error {
  KernelEmpty() : std::runtime_error("region does not meet the perfect kernel") {}
};

inline ClopenRegion runion(const SpaceP& s, const ClopenRegion& a, const ClopenRegion& b) {
  return complement(s, intersect(s, complement(s, a), complement(s, b)));
}

// --- deterministic clopen splitting ------------------------------------------
//
// Greedy leftmost carver: walks the region and emits pairwise-disjoint clopen
// subregions, the i-th meeting the i-th demand (nonempty demands[i]-th
// derivative). Emission order is deterministic and prefix-stable: carving for
// demands d_1..d_k and then for d_1..d_{k+1} yields the same first k regions —
// operators with lazily generated parts rely on this.

namespace detail {

struct Carver {
  const std::vector<Ordinal>& demands;
  size_t next = 0;
  std::vector<ClopenRegion> out;
  using Wrap = std::function<ClopenRegion(const ClopenRegion&)>;

  bool done() const { return next >= demands.size(); }

  void carve(const SpaceP& s, const ClopenRegion& r, const Wrap& wrap) {
    if (done()) return;
    std::visit(
        [&](const auto& rn) {
          using R = std::decay_t<decltype(rn)>;
          if constexpr (std::is_same_v<R, ClopenRegion::Whole>) {
            carve(s, shaped(s, true), wrap);
          } else if constexpr (std::is_same_v<R, ClopenRegion::NoneS>) {
          } else if constexpr (std::is_same_v<R, ClopenRegion::LeafSelect>) {
            for (long long i : rn.indices) {
              if (done() || !demands[next].is_zero()) break;
              out.push_back(wrap(ClopenRegion::leaf_select({i})));
              ++next;
            }
          } else if constexpr (std::is_same_v<R, ClopenRegion::SumSelect>) {
            const auto& parts = std::get<Space::SumN>(s->node).parts;
            for (const auto& [i, sub] : rn.branches) {
              if (done()) break;
              size_t idx = i;
              carve(parts.at(i), sub, [&wrap, idx](const ClopenRegion& x) {
                return wrap(ClopenRegion::sum_select({{idx, x}}));
              });
            }
          } else if constexpr (std::is_same_v<R, ClopenRegion::OnePointSelect>) {
            const auto& op = std::get<Space::OnePointN>(s->node);
            size_t before = out.size();
            long long max_key = 0;
            for (const auto& [c, sub] : rn.children) {
              max_key = std::max(max_key, c);
              if (done()) break;
              long long copy = c;
              carve(member_space(op, c), sub, [&wrap, copy](const ClopenRegion& x) {
                return wrap(ClopenRegion::onepoint_select({{copy, x}}, false));
              });
            }
            if (rn.include_infinity) {
              const auto* ramp = std::get_if<Space::Ramp>(&op.family);
              long long c = max_key + 1;
              while (!done()) {
                SpaceP mem = member_space(op, c);
                if (derived_card(mem, demands[next]) != Cardinal::finite(0)) {
                  out.push_back(wrap(ClopenRegion::onepoint_select(
                      {{c, ClopenRegion::whole()}}, false)));
                  ++next;
                  ++c;
                } else if (ramp && demands[next] < ramp->alpha) {
                  ++c;  // later ramp members are taller
                } else {
                  break;
                }
              }
            }
            // only the compactifying point may carry the demanded rank
            if (out.size() == before && !done() &&
                region_derived_nonempty(s, r, demands[next])) {
              out.push_back(wrap(r));
              ++next;
            }
          } else {  // CantorSel
            auto ps = normalize_prefixes(rn.prefixes);
            if (ps.empty()) return;
            std::string ones;
            while (!done()) {
              out.push_back(wrap(ClopenRegion::cantor_sel({ps[0] + ones + "0"})));
              ++next;
              ones += "1";
            }
          }
        },
        r.node().v);
  }
};

}  // namespace detail

inline std::vector<ClopenRegion> carve_regions(const SpaceP& s, const ClopenRegion& region,
                                               const std::vector<Ordinal>& demands) {
  detail::Carver cv{demands};
  cv.carve(s, region, [](const ClopenRegion& x) { return x; });
  return std::move(cv.out);
}

// Lemma-Split front end: all demands must be met.
inline std::vector<ClopenRegion> split_region(const SpaceP& s, const ClopenRegion& region,
                                              const std::vector<Ordinal>& demands) {
  auto out = carve_regions(s, region, demands);
  if (out.size() < demands.size()) throw InsufficientHeight();
  return out;
}

// --- continuous surjections --------------------------------------------------
//
// A SurjectionMap sends (a clopen part of) the canonical tree of K onto a
// target space, mirroring the proof shape: route each carved subregion through
// a sub-map onto a segment of the target and send all unrouted mass to the
// top point.

class SurjectionMap {
public:
  struct Node;

  struct ToPoint { Point target; };
  // Identity onto the Cantor target from a single-cylinder region: the bits
  // after `strip` become the target point.
  struct CantorIdent {
    ClopenRegion region;
    std::string strip;
  };
  struct Route;

  SurjectionMap();
  SurjectionMap(SpaceP source, SpaceP target, Node n);

  const SpaceP& source() const { return source_; }
  const SpaceP& target() const { return target_; }
  const Node& node() const;

private:
  SpaceP source_;  // canonical tree of K
  SpaceP target_;  // Interval(alpha, m) or Cantor
  std::shared_ptr<const Node> n_;
};

struct SurjectionMap::Route {
  struct Part {
    ClopenRegion region;
    SurjectionMap sub;
    Ordinal offset;  // target point = offset + sub's ordinal value
  };
  std::map<long long, Part> parts;
  Point default_target;
  ClopenRegion carve_base;
  bool lazy = false;
  long long floor = 0;  // parts <= floor are authoritative; beyond: regenerate
  // regeneration is deterministic, so memoizing it is observationally pure
  mutable std::map<long long, Part> regen_cache;
};

struct SurjectionMap::Node {
  std::variant<ToPoint, CantorIdent, Route> v;
};

inline SurjectionMap::SurjectionMap(SpaceP source, SpaceP target, Node n)
    : source_(std::move(source)),
      target_(std::move(target)),
      n_(std::make_shared<const Node>(std::move(n))) {}
inline SurjectionMap::SurjectionMap()
    : SurjectionMap(space_fin(1), space_interval(Ordinal(), 1),
                    Node{ToPoint{Point::of(Point::OrdinalPoint{Ordinal::from_nat(1)})}}) {}
inline const SurjectionMap::Node& SurjectionMap::node() const { return *n_; }

inline SurjectionMap synth_surjection(const SpaceP& K, const Ordinal& alpha, long long m,
                                      const ClopenRegion& region);

namespace detail {

// Demand and segment offset for part gamma of a surjection onto [1, w^alpha].
inline Ordinal route_demand(const Ordinal& alpha, long long gamma) {
  OrdinalClass c = classify(alpha);
  if (c.kind == OrdinalClass::Successor) return c.pred;
  return fund_seq(alpha, gamma);
}
inline Ordinal route_offset(const Ordinal& alpha, long long gamma) {
  if (gamma == 1) return Ordinal();
  OrdinalClass c = classify(alpha);
  if (c.kind == OrdinalClass::Successor) return mul_nat(omega_pow(c.pred), gamma - 1);
  return omega_pow(fund_seq(alpha, gamma - 1));
}

inline std::optional<SurjectionMap::Route::Part> regen_route_part(
    const SpaceP& source, const Ordinal& alpha, const ClopenRegion& base, long long gamma) {
  std::vector<Ordinal> demands;
  for (long long g = 1; g <= gamma; ++g) demands.push_back(route_demand(alpha, g));
  auto regions = carve_regions(source, base, demands);
  if ((long long)regions.size() < gamma) return std::nullopt;
  SurjectionMap sub =
      synth_surjection(source, route_demand(alpha, gamma), 1, regions[gamma - 1]);
  return SurjectionMap::Route::Part{regions[gamma - 1], std::move(sub),
                                    route_offset(alpha, gamma)};
}

// Largest copy index appearing on the point's path (bounds lazy part search).
inline long long max_copy_index(const Point& p) {
  long long m = 0;
  for (const auto& st : p.path)
    if (const auto* c = std::get_if<Point::CopyIndex>(&st)) m = std::max(m, c->n);
  return m;
}

inline const Point::CantorPrefix& cantor_step(const Point& p) {
  for (const auto& st : p.path)
    if (const auto* c = std::get_if<Point::CantorPrefix>(&st)) return *c;
  throw InvalidPoint("point has no Cantor coordinate");
}

}  // namespace detail

// Total evaluation: the target point of p under the map.
inline Point surj_eval(const SurjectionMap& M, const Point& p) {
  return std::visit(
      [&](const auto& n) -> Point {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, SurjectionMap::ToPoint>) {
          return n.target;
        } else if constexpr (std::is_same_v<T, SurjectionMap::CantorIdent>) {
          const auto& cp = detail::cantor_step(p);
          std::string bits = cp.bits;
          if (bits.size() < n.strip.size()) {
            if (!cp.zero_tail) throw InvalidPoint("Cantor prefix too short");
            bits.append(n.strip.size() - bits.size(), '0');
          }
          return Point::of(Point::CantorPrefix{bits.substr(n.strip.size()), cp.zero_tail});
        } else {
          const auto* iv = std::get_if<Space::Interval>(&M.target()->node);
          auto route = [&](const SurjectionMap::Route::Part& part) -> Point {
            Point q = surj_eval(part.sub, p);
            if (const auto* o = std::get_if<Point::OrdinalPoint>(&q.path.at(0)))
              return Point::of(Point::OrdinalPoint{add(part.offset, o->o)});
            return q;
          };
          for (const auto& [g, part] : n.parts)
            if (contains_point(M.source(), part.region, p)) return route(part);
          if (n.lazy && iv) {
            long long bound = n.floor + detail::max_copy_index(p) + 2;
            for (long long g = n.floor + 1; g <= bound; ++g) {
              auto cit = n.regen_cache.find(g);
              if (cit == n.regen_cache.end()) {
                auto part = detail::regen_route_part(M.source(), iv->alpha, n.carve_base, g);
                if (!part) break;
                cit = n.regen_cache.emplace(g, std::move(*part)).first;
              }
              if (contains_point(M.source(), cit->second.region, p)) return route(cit->second);
            }
          }
          return n.default_target;
        }
      },
      M.node().v);
}

inline SurjectionMap synth_surjection(const SpaceP& K, const Ordinal& alpha, long long m,
                                      const ClopenRegion& region) {
  if (!constructive(K)) throw NotConstructive();
  if (!zero_dimensional(K)) throw NotZeroDimensional();
  SpaceP Kt = canonical_tree(K);
  Cardinal avail = region_derived_card(Kt, region, alpha);
  if (card_le(Cardinal::finite(m), avail) != Truth3::Yes) throw InsufficientDerivedSet();
  SpaceP target = space_interval(alpha, m);
  if (alpha.is_zero() && m == 1)
    return SurjectionMap(Kt, target,
                         SurjectionMap::Node{SurjectionMap::ToPoint{
                             Point::of(Point::OrdinalPoint{Ordinal::from_nat(1)})}});
  SurjectionMap::Route route;
  route.carve_base = region;
  if (m > 1) {
    std::vector<Ordinal> demands(m, alpha);
    auto regions = carve_regions(Kt, region, demands);
    if ((long long)regions.size() < m) throw InsufficientDerivedSet();
    for (long long i = 1; i <= m; ++i)
      route.parts.emplace(i, SurjectionMap::Route::Part{
                                 regions[i - 1], synth_surjection(K, alpha, 1, regions[i - 1]),
                                 i == 1 ? Ordinal() : mul_nat(omega_pow(alpha), i - 1)});
    route.default_target = Point::of(Point::OrdinalPoint{mul_nat(omega_pow(alpha), m)});
    route.lazy = false;
    route.floor = m;
  } else {
    route.default_target = Point::of(Point::OrdinalPoint{omega_pow(alpha)});
    route.lazy = true;
    route.floor = 1;  // keep the stored prefix small: parts nest recursively
    for (long long g = 1; g <= route.floor; ++g) {
      auto part = detail::regen_route_part(Kt, alpha, region, g);
      if (!part) throw InsufficientDerivedSet();
      route.parts.emplace(g, std::move(*part));
    }
  }
  return SurjectionMap(Kt, target, SurjectionMap::Node{std::move(route)});
}

// Restrict a single-atom region to the cylinder `prefix` of its Cantor leaf.
inline ClopenRegion refine_cantor(const SpaceP& s, const ClopenRegion& r,
                                  const std::string& prefix) {
  if (std::holds_alternative<Space::CantorA>(s->node)) {
    if (std::holds_alternative<ClopenRegion::Whole>(r.node().v))
      return ClopenRegion::cantor_sel({prefix});
    const auto& cs = std::get<ClopenRegion::CantorSel>(r.node().v);
    return ClopenRegion::cantor_sel(
        detail::prefixes_intersect(detail::normalize_prefixes(cs.prefixes), {prefix}));
  }
  if (const auto* ss = std::get_if<ClopenRegion::SumSelect>(&r.node().v)) {
    const auto& parts = std::get<Space::SumN>(s->node).parts;
    std::map<size_t, ClopenRegion> bs;
    for (const auto& [i, sub] : ss->branches)
      bs.emplace(i, refine_cantor(parts.at(i), sub, prefix));
    return ClopenRegion::sum_select(std::move(bs));
  }
  if (const auto* os = std::get_if<ClopenRegion::OnePointSelect>(&r.node().v)) {
    const auto& op = std::get<Space::OnePointN>(s->node);
    std::map<long long, ClopenRegion> cs;
    for (const auto& [c, sub] : os->children)
      cs.emplace(c, refine_cantor(member_space(op, c), sub, prefix));
    return ClopenRegion::onepoint_select(std::move(cs), false);
  }
  throw InvalidRegion("region does not descend to a single Cantor atom");
}

// Leftmost Cantor atom inside the region, as a single-cylinder region plus the
// cylinder prefix.
inline std::optional<std::pair<ClopenRegion, std::string>> find_cantor_region(
    const SpaceP& s, const ClopenRegion& r) {
  using Res = std::optional<std::pair<ClopenRegion, std::string>>;
  if (region_empty(s, r)) return std::nullopt;
  return std::visit(
      [&](const auto& n) -> Res {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Space::CantorA>) {
          std::vector<std::string> ps = {""};
          if (const auto* cs = std::get_if<ClopenRegion::CantorSel>(&r.node().v))
            ps = detail::normalize_prefixes(cs->prefixes);
          if (ps.empty()) return std::nullopt;
          return std::make_pair(ClopenRegion::cantor_sel({ps[0]}), ps[0]);
        } else if constexpr (std::is_same_v<T, Space::SumN>) {
          ClopenRegion rr = std::holds_alternative<ClopenRegion::Whole>(r.node().v)
                                ? detail::shaped(s, true)
                                : r;
          const auto& ss = std::get<ClopenRegion::SumSelect>(rr.node().v);
          for (const auto& [i, sub] : ss.branches) {
            auto got = find_cantor_region(n.parts.at(i), sub);
            if (got)
              return std::make_pair(ClopenRegion::sum_select({{i, got->first}}), got->second);
          }
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, Space::OnePointN>) {
          ClopenRegion rr = std::holds_alternative<ClopenRegion::Whole>(r.node().v)
                                ? detail::shaped(s, true)
                                : r;
          const auto& os = std::get<ClopenRegion::OnePointSelect>(rr.node().v);
          long long max_key = 0;
          for (const auto& [c, sub] : os.children) {
            max_key = std::max(max_key, c);
            auto got = find_cantor_region(member_space(n, c), sub);
            if (got)
              return std::make_pair(
                  ClopenRegion::onepoint_select({{c, got->first}}, false), got->second);
          }
          if (os.include_infinity) {
            long long c = max_key + 1;
            auto got = find_cantor_region(member_space(n, c), ClopenRegion::whole());
            if (got)
              return std::make_pair(
                  ClopenRegion::onepoint_select({{c, got->first}}, false), got->second);
          }
          return std::nullopt;
        } else {
          return std::nullopt;
        }
      },
      s->node);
}

inline SurjectionMap synth_cantor_surjection(const SpaceP& K, const ClopenRegion& region) {
  if (!constructive(K)) throw NotConstructive();
  if (!zero_dimensional(K)) throw NotZeroDimensional();
  SpaceP Kt = canonical_tree(K);
  auto atom = find_cantor_region(Kt, region);
  if (!atom) throw KernelEmpty();
  SurjectionMap ident(Kt, space_cantor(),
                      SurjectionMap::Node{SurjectionMap::CantorIdent{atom->first, atom->second}});
  SurjectionMap::Route route;
  route.parts.emplace(1, SurjectionMap::Route::Part{atom->first, std::move(ident), Ordinal()});
  route.default_target = Point::of(Point::CantorPrefix{"", true});
  route.carve_base = region;
  route.lazy = false;
  route.floor = 1;
  return SurjectionMap(Kt, space_cantor(), SurjectionMap::Node{std::move(route)});
}

// --- composition f -> f o rho ------------------------------------------------

// FunctionRep of f o rho on the source tree, equal to f o rho on the map's
// scope and zero off it; built from finitely many exact sums.
inline FunctionRep comp_fn(const SurjectionMap& M, const FunctionRep& f,
                           const ClopenRegion& scope) {
  const SpaceP& Ks = M.source();
  return std::visit(
      [&](const auto& n) -> FunctionRep {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, SurjectionMap::ToPoint>) {
          SpaceP tt = canonical_tree(M.target());
          Point q = n.target;
          if (const auto* o = std::get_if<Point::OrdinalPoint>(&q.path.at(0))) {
            const auto& iv = std::get<Space::Interval>(M.target()->node);
            q = ordinal_to_tree_point(iv.alpha, iv.m, o->o);
          }
          return scale(Ks, indicator(Ks, scope), eval(tt, f, q));
        } else if constexpr (std::is_same_v<T, SurjectionMap::CantorIdent>) {
          const auto& cf = std::get<FunctionRep::CantorFn>(f.node().v);
          FunctionRep g = const_fn(Ks, Rational(0));
          for (size_t i = 0; i < cf.values.size(); ++i) {
            if (cf.values[i].is_zero()) continue;
            std::string bits;
            for (int b = cf.depth - 1; b >= 0; --b) bits += char('0' + ((i >> b) & 1));
            ClopenRegion cell = refine_cantor(Ks, n.region, n.strip + bits);
            g = add(Ks, g, scale(Ks, indicator(Ks, cell), cf.values[i]));
          }
          return g;
        } else {
          const auto* iv = std::get_if<Space::Interval>(&M.target()->node);
          SpaceP tt = canonical_tree(M.target());
          // value on the unrouted mass
          Point dq = n.default_target;
          if (const auto* o = std::get_if<Point::OrdinalPoint>(&dq.path.at(0)))
            dq = ordinal_to_tree_point(iv->alpha, iv->m, o->o);
          Rational v0 = eval(tt, f, dq);
          FunctionRep g = scale(Ks, indicator(Ks, scope), v0);

          // pieces of f per part: block gamma of a sum tree, or child gamma of
          // a one-point tree (constant tail when unstored)
          std::set<long long> needed;
          for (const auto& [gi, part] : n.parts) needed.insert(gi);
          long long max_child = 0;
          if (const auto* of = std::get_if<FunctionRep::OnePointFn>(&f.node().v))
            for (const auto& [c, ch] : of->children) {
              needed.insert(c);
              max_child = std::max(max_child, c);
            }
          (void)max_child;
          for (long long gi : needed) {
            SurjectionMap::Route::Part part;
            auto it = n.parts.find(gi);
            if (it != n.parts.end()) {
              part = it->second;
            } else if (n.lazy && iv && gi > n.floor) {
              auto cit = n.regen_cache.find(gi);
              if (cit == n.regen_cache.end()) {
                auto regen = detail::regen_route_part(Ks, iv->alpha, n.carve_base, gi);
                if (!regen) continue;
                cit = n.regen_cache.emplace(gi, std::move(*regen)).first;
              }
              part = cit->second;
            } else {
              continue;  // dropped stored part: contributes nothing
            }
            FunctionRep fg;
            SpaceP sub_tt = canonical_tree(part.sub.target());
            if (!iv) {  // Cantor target: the single part carries all of f
              fg = f;
            } else if (const auto* sf = std::get_if<FunctionRep::SumFn>(&f.node().v)) {
              fg = sf->parts.at(gi - 1);
            } else {
              const auto& of = std::get<FunctionRep::OnePointFn>(f.node().v);
              auto cit = of.children.find(gi);
              fg = cit != of.children.end() ? cit->second : const_fn(sub_tt, of.tail);
            }
            FunctionRep piece = comp_fn(part.sub, fg, part.region);
            g = add(Ks, g, sub(Ks, piece, scale(Ks, indicator(Ks, part.region), v0)));
          }
          return g;
        }
      },
      M.node().v);
}

// --- operators ---------------------------------------------------------------

class Operator {
public:
  struct Node;

  struct Cells { std::vector<ClopenRegion> cells; };  // domain fin(n)
  struct Blocks;
  struct GluePart;
  struct Glue;
  struct Compose {
    SurjectionMap rho;
    std::optional<ClopenRegion> cutoff;
  };

  Operator();
  Operator(SpaceP domain, SpaceP codomain, Node n);

  const SpaceP& domain() const { return domain_; }
  const SpaceP& codomain() const { return codomain_; }
  const Node& node() const;

private:
  SpaceP domain_;    // canonical tree of L
  SpaceP codomain_;  // canonical tree of K
  std::shared_ptr<const Node> n_;
};

struct Operator::Blocks {
  std::vector<std::pair<ClopenRegion, Operator>> parts;  // domain a sum tree
};
struct Operator::GluePart {
  ClopenRegion region;
  Operator op;
};
struct Operator::Glue {  // domain a one-point tree: T(g) = a_g * chi_h + sum T_gamma(g_gamma)
  ClopenRegion h_region;
  ClopenRegion carve_base;
  std::map<long long, GluePart> parts;
  bool lazy = false;
  long long floor = 0;
  mutable std::map<long long, Operator> regen_cache;
};

struct Operator::Node {
  std::variant<Cells, Blocks, Glue, Compose> v;
};

inline Operator::Operator(SpaceP domain, SpaceP codomain, Node n)
    : domain_(std::move(domain)),
      codomain_(std::move(codomain)),
      n_(std::make_shared<const Node>(std::move(n))) {}
inline Operator::Operator()
    : Operator(space_fin(1), space_fin(1), Node{Cells{{ClopenRegion::whole()}}}) {}
inline const Operator::Node& Operator::node() const { return *n_; }

inline ClopenRegion support_of(const Operator& T) {
  return std::visit(
      [&](const auto& n) -> ClopenRegion {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Operator::Cells>) {
          ClopenRegion u = ClopenRegion::none();
          for (const auto& c : n.cells) u = runion(T.codomain(), u, c);
          return u;
        } else if constexpr (std::is_same_v<N, Operator::Blocks>) {
          ClopenRegion u = ClopenRegion::none();
          for (const auto& [r, op] : n.parts) u = runion(T.codomain(), u, r);
          return u;
        } else if constexpr (std::is_same_v<N, Operator::Glue>) {
          return n.h_region;
        } else {
          return n.cutoff ? *n.cutoff : ClopenRegion::whole();
        }
      },
      T.node().v);
}

// Construction-time validation (Prop copies-of-C(K_Gamma,L) hypotheses).
inline Operator make_cells(SpaceP domain, SpaceP codomain, std::vector<ClopenRegion> cells) {
  for (size_t i = 0; i < cells.size(); ++i) {
    if (region_empty(codomain, cells[i]))
      throw ContainmentViolation("empty cell breaks the isometry");
    for (size_t j = i + 1; j < cells.size(); ++j)
      if (!disjoint(codomain, cells[i], cells[j])) throw RegionOverlap();
  }
  return Operator(std::move(domain), std::move(codomain),
                  Operator::Node{Operator::Cells{std::move(cells)}});
}

inline Operator make_blocks(SpaceP domain, SpaceP codomain,
                            std::vector<std::pair<ClopenRegion, Operator>> parts) {
  for (size_t i = 0; i < parts.size(); ++i) {
    if (!region_subset(codomain, support_of(parts[i].second), parts[i].first))
      throw ContainmentViolation("block operator escapes its region");
    for (size_t j = i + 1; j < parts.size(); ++j)
      if (!disjoint(codomain, parts[i].first, parts[j].first)) throw RegionOverlap();
  }
  return Operator(std::move(domain), std::move(codomain),
                  Operator::Node{Operator::Blocks{std::move(parts)}});
}

inline Operator glue(SpaceP domain, SpaceP codomain, ClopenRegion h_region,
                     ClopenRegion carve_base, std::map<long long, Operator::GluePart> parts,
                     bool lazy = false, long long floor = 0) {
  if (region_empty(codomain, h_region))
    throw ContainmentViolation("empty h-region breaks the isometry");
  for (auto it = parts.begin(); it != parts.end(); ++it) {
    if (!region_subset(codomain, it->second.region, h_region))
      throw ContainmentViolation("part region escapes {h = 1}");
    if (!region_subset(codomain, support_of(it->second.op), it->second.region))
      throw ContainmentViolation("part operator escapes its region");
    for (auto jt = std::next(it); jt != parts.end(); ++jt)
      if (!disjoint(codomain, it->second.region, jt->second.region)) throw RegionOverlap();
  }
  return Operator(std::move(domain), std::move(codomain),
                  Operator::Node{Operator::Glue{std::move(h_region), std::move(carve_base),
                                                std::move(parts), lazy, floor}});
}

inline Operator composition_operator(SurjectionMap rho,
                                     std::optional<ClopenRegion> cutoff = std::nullopt) {
  SpaceP domain = canonical_tree(rho.target());
  SpaceP codomain = rho.source();
  return Operator(std::move(domain), std::move(codomain),
                  Operator::Node{Operator::Compose{std::move(rho), std::move(cutoff)}});
}

inline Operator synth_interval_embedding(const SpaceP& K, const Ordinal& alpha, long long m,
                                         const ClopenRegion& region);

namespace detail {

inline Operator regen_glue_part_op(const SpaceP& K, const SpaceP& Kt, const Ordinal& alpha,
                                   const ClopenRegion& base, long long gamma,
                                   ClopenRegion* region_out) {
  std::vector<Ordinal> demands;
  for (long long g = 1; g <= gamma; ++g) demands.push_back(route_demand(alpha, g));
  auto regions = carve_regions(Kt, base, demands);
  if ((long long)regions.size() < gamma) throw InsufficientDerivedSet();
  if (region_out) *region_out = regions[gamma - 1];
  return synth_interval_embedding(K, route_demand(alpha, gamma), 1, regions[gamma - 1]);
}

// The interval exponent alpha of a glue operator's domain one-point node.
inline Ordinal glue_domain_exponent(const SpaceP& domain) {
  HeightInfo h = height_info(domain);
  OrdinalClass c = classify(h.value);
  return c.pred;
}

}  // namespace detail

inline FunctionRep apply(const Operator& T, const FunctionRep& f) {
  const SpaceP& K = T.codomain();
  if (!shape_ok(T.domain(), f)) throw SpaceMismatch("function does not fit the domain");
  return std::visit(
      [&](const auto& n) -> FunctionRep {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Operator::Cells>) {
          const auto& lv = std::get<FunctionRep::LeafVec>(f.node().v);
          FunctionRep g = const_fn(K, Rational(0));
          for (size_t i = 0; i < n.cells.size(); ++i)
            g = add(K, g, scale(K, indicator(K, n.cells[i]), lv.values.at(i)));
          return g;
        } else if constexpr (std::is_same_v<N, Operator::Blocks>) {
          const auto& sf = std::get<FunctionRep::SumFn>(f.node().v);
          FunctionRep g = const_fn(K, Rational(0));
          for (size_t i = 0; i < n.parts.size(); ++i)
            g = add(K, g, apply(n.parts[i].second, sf.parts.at(i)));
          return g;
        } else if constexpr (std::is_same_v<N, Operator::Glue>) {
          auto [a, gparts] = decompose(T.domain(), f);
          FunctionRep g = scale(K, indicator(K, n.h_region), a);
          for (const auto& [gi, fg] : gparts) {
            auto it = n.parts.find(gi);
            if (it != n.parts.end()) {
              g = add(K, g, apply(it->second.op, fg));
            } else if (n.lazy && gi > n.floor) {
              auto cit = n.regen_cache.find(gi);
              if (cit == n.regen_cache.end()) {
                Ordinal alpha = detail::glue_domain_exponent(T.domain());
                cit = n.regen_cache
                          .emplace(gi, detail::regen_glue_part_op(K, K, alpha, n.carve_base,
                                                                  gi, nullptr))
                          .first;
              }
              g = add(K, g, apply(cit->second, fg));
            }
            // a stored-range part that is missing contributes nothing
          }
          return g;
        } else {
          FunctionRep g = comp_fn(n.rho, f, ClopenRegion::whole());
          if (n.cutoff) g = mul(K, g, indicator(K, *n.cutoff));
          return g;
        }
      },
      T.node().v);
}

inline Operator synth_interval_embedding(const SpaceP& K, const Ordinal& alpha, long long m,
                                         const ClopenRegion& region) {
  if (!constructive(K)) throw NotConstructive();
  if (!zero_dimensional(K)) throw NotZeroDimensional();
  SpaceP Kt = canonical_tree(K);
  Cardinal avail = region_derived_card(Kt, region, alpha);
  if (card_le(Cardinal::finite(m), avail) != Truth3::Yes) throw InsufficientDerivedSet();
  SpaceP domain = canonical_tree(space_interval(alpha, m));
  if (alpha.is_zero()) {
    std::vector<Ordinal> demands(m, Ordinal());
    auto cells = carve_regions(Kt, region, demands);
    if ((long long)cells.size() < m) throw InsufficientDerivedSet();
    return make_cells(domain, Kt, std::move(cells));
  }
  if (m > 1) {
    std::vector<Ordinal> demands(m, alpha);
    auto regions = carve_regions(Kt, region, demands);
    if ((long long)regions.size() < m) throw InsufficientDerivedSet();
    std::vector<std::pair<ClopenRegion, Operator>> parts;
    for (long long i = 0; i < m; ++i)
      parts.emplace_back(regions[i], synth_interval_embedding(K, alpha, 1, regions[i]));
    return make_blocks(domain, Kt, std::move(parts));
  }
  std::map<long long, Operator::GluePart> parts;
  long long floor = 1;  // keep the stored prefix small: parts nest recursively
  for (long long g = 1; g <= floor; ++g) {
    ClopenRegion rg;
    Operator op = detail::regen_glue_part_op(K, Kt, alpha, region, g, &rg);
    parts.emplace(g, Operator::GluePart{std::move(rg), std::move(op)});
  }
  return glue(domain, Kt, region, region, std::move(parts), true, floor);
}

// Cellular-witness embedding of C(K_{n,[1,w^alpha]}) = C([1, w^alpha * n]).
inline Operator synth_onepoint_embedding(const SpaceP& K, long long n, const Ordinal& alpha) {
  if (!constructive(K)) throw NotConstructive();
  if (!zero_dimensional(K)) throw NotZeroDimensional();
  SpaceP Kt = canonical_tree(K);
  std::vector<Ordinal> demands(n, alpha);
  auto regions = carve_regions(Kt, ClopenRegion::whole(), demands);
  if ((long long)regions.size() < n) throw InsufficientCellularity();
  SpaceP domain = canonical_tree(space_interval(alpha, n));
  if (n == 1) return synth_interval_embedding(K, alpha, 1, regions[0]);
  std::vector<std::pair<ClopenRegion, Operator>> parts;
  for (long long i = 0; i < n; ++i)
    parts.emplace_back(regions[i], synth_interval_embedding(K, alpha, 1, regions[i]));
  return make_blocks(domain, Kt, std::move(parts));
}

// Countable-Gamma variant: C(K_{N, [1,w^alpha]}) = C([1, w^(alpha+1)]) with h
// the constant-1 function.
inline Operator synth_onepoint_embedding_inf(const SpaceP& K, const Ordinal& alpha) {
  Ordinal a1 = succ(alpha);
  SpaceP Kt = canonical_tree(K);
  if (region_derived_card(Kt, ClopenRegion::whole(), a1) == Cardinal::finite(0))
    throw InsufficientCellularity();
  return synth_interval_embedding(K, a1, 1, ClopenRegion::whole());
}

inline Operator synth_cantor_embedding(const SpaceP& K, const ClopenRegion& region) {
  SurjectionMap rho = synth_cantor_surjection(K, region);
  return composition_operator(std::move(rho), region);
}

// --- serialization -----------------------------------------------------------

inline nlohmann::json surj_to_json(const SurjectionMap& M) {
  nlohmann::json node = std::visit(
      [&](const auto& n) -> nlohmann::json {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, SurjectionMap::ToPoint>) {
          return {{"to_point", point_to_json(n.target)}};
        } else if constexpr (std::is_same_v<T, SurjectionMap::CantorIdent>) {
          return {{"cantor_ident",
                   {{"region", region_to_json(n.region)}, {"strip", n.strip}}}};
        } else {
          nlohmann::json parts = nlohmann::json::object();
          for (const auto& [g, part] : n.parts)
            parts[std::to_string(g)] = {{"region", region_to_json(part.region)},
                                        {"offset", print(part.offset)},
                                        {"sub", surj_to_json(part.sub)}};
          return {{"route",
                   {{"default", point_to_json(n.default_target)},
                    {"base", region_to_json(n.carve_base)},
                    {"lazy", n.lazy},
                    {"floor", n.floor},
                    {"parts", parts}}}};
        }
      },
      M.node().v);
  return {{"source", print(M.source())}, {"target", print(M.target())}, {"map", node}};
}

inline SurjectionMap surj_from_json(const nlohmann::json& j) {
  SpaceP source = parse_space(j["source"].get<std::string>());
  SpaceP target = parse_space(j["target"].get<std::string>());
  const auto& node = j["map"];
  if (node.contains("to_point"))
    return SurjectionMap(source, target,
                         SurjectionMap::Node{
                             SurjectionMap::ToPoint{point_from_json(node["to_point"])}});
  if (node.contains("cantor_ident"))
    return SurjectionMap(
        source, target,
        SurjectionMap::Node{SurjectionMap::CantorIdent{
            region_from_json(node["cantor_ident"]["region"]),
            node["cantor_ident"]["strip"].get<std::string>()}});
  const auto& rt = node["route"];
  SurjectionMap::Route route;
  route.default_target = point_from_json(rt["default"]);
  route.carve_base = region_from_json(rt["base"]);
  route.lazy = rt["lazy"].get<bool>();
  route.floor = rt["floor"].get<long long>();
  for (const auto& [k, v] : rt["parts"].items())
    route.parts.emplace(std::stoll(k),
                        SurjectionMap::Route::Part{
                            region_from_json(v["region"]), surj_from_json(v["sub"]),
                            parse_ordinal(v["offset"].get<std::string>())});
  return SurjectionMap(source, target, SurjectionMap::Node{std::move(route)});
}

inline nlohmann::json op_to_json(const Operator& T) {
  nlohmann::json node = std::visit(
      [&](const auto& n) -> nlohmann::json {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Operator::Cells>) {
          nlohmann::json cs = nlohmann::json::array();
          for (const auto& c : n.cells) cs.push_back(region_to_json(c));
          return {{"cells", cs}};
        } else if constexpr (std::is_same_v<N, Operator::Blocks>) {
          nlohmann::json ps = nlohmann::json::array();
          for (const auto& [r, op] : n.parts)
            ps.push_back({{"region", region_to_json(r)}, {"op", op_to_json(op)}});
          return {{"blocks", ps}};
        } else if constexpr (std::is_same_v<N, Operator::Glue>) {
          nlohmann::json ps = nlohmann::json::object();
          for (const auto& [g, part] : n.parts)
            ps[std::to_string(g)] = {{"region", region_to_json(part.region)},
                                     {"op", op_to_json(part.op)}};
          return {{"glue",
                   {{"h", region_to_json(n.h_region)},
                    {"base", region_to_json(n.carve_base)},
                    {"lazy", n.lazy},
                    {"floor", n.floor},
                    {"parts", ps}}}};
        } else {
          nlohmann::json c = n.cutoff ? region_to_json(*n.cutoff) : nlohmann::json(nullptr);
          return {{"compose", {{"rho", surj_to_json(n.rho)}, {"cutoff", c}}}};
        }
      },
      T.node().v);
  return {{"domain", print(T.domain())}, {"codomain", print(T.codomain())}, {"op", node}};
}

inline Operator op_from_json(const nlohmann::json& j) {
  SpaceP domain = parse_space(j["domain"].get<std::string>());
  SpaceP codomain = parse_space(j["codomain"].get<std::string>());
  const auto& node = j["op"];
  if (node.contains("cells")) {
    std::vector<ClopenRegion> cs;
    for (const auto& c : node["cells"]) cs.push_back(region_from_json(c));
    return make_cells(domain, codomain, std::move(cs));
  }
  if (node.contains("blocks")) {
    std::vector<std::pair<ClopenRegion, Operator>> ps;
    for (const auto& p : node["blocks"])
      ps.emplace_back(region_from_json(p["region"]), op_from_json(p["op"]));
    return make_blocks(domain, codomain, std::move(ps));
  }
  if (node.contains("glue")) {
    const auto& g = node["glue"];
    std::map<long long, Operator::GluePart> ps;
    for (const auto& [k, v] : g["parts"].items())
      ps.emplace(std::stoll(k),
                 Operator::GluePart{region_from_json(v["region"]), op_from_json(v["op"])});
    return glue(domain, codomain, region_from_json(g["h"]), region_from_json(g["base"]),
                std::move(ps), g["lazy"].get<bool>(), g["floor"].get<long long>());
  }
  if (node.contains("compose")) {
    std::optional<ClopenRegion> cutoff;
    if (!node["compose"]["cutoff"].is_null())
      cutoff = region_from_json(node["compose"]["cutoff"]);
    return composition_operator(surj_from_json(node["compose"]["rho"]), std::move(cutoff));
  }
  throw std::invalid_argument("unrecognized operator JSON");
}

}  // namespace ck

#endif

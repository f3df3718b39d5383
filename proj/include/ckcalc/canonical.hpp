#ifndef CKCALC_CANONICAL_HPP
#define CKCALC_CANONICAL_HPP

#include <variant>

#include "json.hpp"
#include "rational.hpp"
#include "space.hpp"

namespace ck {

struct InvalidPoint : std::runtime_error {
  explicit InvalidPoint(const std::string& msg) : std::runtime_error("invalid point: " + msg) {}
};

// --- canonical trees ---------------------------------------------------------
//
// Every constructive space is rewritten to a tree over
//   fin / cantor / unit / sum / op(w, tree) / opramp(limit),
// eliminating ordinal intervals:
//   I(a, m), m > 1   ->  sum of m copies of the tree of I(a, 1)
//   I(0, 1)          ->  fin(1)
//   I(b+1, 1)        ->  op(w, tree of I(b, 1))
//   I(a, 1), a limit ->  opramp(a), whose n-th member is the tree of
//                        I(fund_seq(a, n), 1)

inline SpaceP canonical_tree(const SpaceP& s);

// The n-th member space of a one-point node (n >= 1).
inline SpaceP member_space(const Space::OnePointN& n, long long copy) {
  if (copy < 1) throw std::invalid_argument("copy index must be >= 1");
  if (const auto* u = std::get_if<Space::Uniform>(&n.family)) return u->member;
  const auto& r = std::get<Space::Ramp>(n.family);
  auto it = r.member_cache.find(copy);
  if (it == r.member_cache.end())
    it = r.member_cache
             .emplace(copy, canonical_tree(space_interval(fund_seq(r.alpha, copy), 1)))
             .first;
  return it->second;
}

inline SpaceP canonical_tree(const SpaceP& s) {
  return std::visit(
      [&](const auto& n) -> SpaceP {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Space::Interval>) {
          if (n.alpha.is_zero()) return space_fin(n.m);
          if (n.m > 1) {
            std::vector<SpaceP> parts(n.m, canonical_tree(space_interval(n.alpha, 1)));
            return space_sum(std::move(parts));
          }
          OrdinalClass c = classify(n.alpha);
          if (c.kind == OrdinalClass::Zero) return space_fin(1);
          if (c.kind == OrdinalClass::Successor)
            return space_onepoint(canonical_tree(space_interval(c.pred, 1)));
          return space_opramp(n.alpha);
        } else if constexpr (std::is_same_v<T, Space::SumN>) {
          std::vector<SpaceP> parts;
          for (const auto& p : n.parts) parts.push_back(canonical_tree(p));
          return space_sum(std::move(parts));
        } else if constexpr (std::is_same_v<T, Space::OnePointN>) {
          if (std::holds_alternative<Space::Ramp>(n.family)) return s;
          return space_onepoint(canonical_tree(std::get<Space::Uniform>(n.family).member),
                                n.index);
        } else if constexpr (std::is_same_v<T, Space::Atom>) {
          throw NotConstructive();
        } else {
          return s;
        }
      },
      s->node);
}

// --- points ------------------------------------------------------------------

struct Point {
  struct SumBranch { size_t i; };       // 0-based part index
  struct CopyIndex { long long n; };    // 1-based copy in a one-point node
  struct AtInfinity {};                 // the compactifying point
  struct LeafIndex { long long i; };    // 1-based element of fin(n)
  struct OrdinalPoint { Ordinal o; };   // element of [1, w^a * m], 1 <= o
  struct CantorPrefix {                 // finite bits; zero_tail pads with 0s
    std::string bits;
    bool zero_tail;
  };
  struct UnitCoord { Rational x; };

  using Step = std::variant<SumBranch, CopyIndex, AtInfinity, LeafIndex, OrdinalPoint,
                            CantorPrefix, UnitCoord>;
  std::vector<Step> path;

  Point child() const {
    Point p;
    p.path.assign(path.begin() + 1, path.end());
    return p;
  }
  static Point of(Step s) { return Point{{std::move(s)}}; }
  Point prepend(Step s) const {
    Point p;
    p.path.push_back(std::move(s));
    p.path.insert(p.path.end(), path.begin(), path.end());
    return p;
  }
};

inline std::string point_str(const Point& p) {
  std::string out;
  for (size_t i = 0; i < p.path.size(); ++i) {
    if (i) out += ".";
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Point::SumBranch>)
            out += "part" + std::to_string(s.i);
          else if constexpr (std::is_same_v<T, Point::CopyIndex>)
            out += "copy" + std::to_string(s.n);
          else if constexpr (std::is_same_v<T, Point::AtInfinity>)
            out += "inf";
          else if constexpr (std::is_same_v<T, Point::LeafIndex>)
            out += "leaf" + std::to_string(s.i);
          else if constexpr (std::is_same_v<T, Point::OrdinalPoint>)
            out += "ord(" + print(s.o) + ")";
          else if constexpr (std::is_same_v<T, Point::CantorPrefix>)
            out += "bits(" + s.bits + (s.zero_tail ? ",0tail)" : ")");
          else
            out += "x(" + s.x.str() + ")";
        },
        p.path[i]);
  }
  return out.empty() ? "<root>" : out;
}

inline nlohmann::json point_to_json(const Point& p) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& st : p.path)
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Point::SumBranch>)
            steps.push_back({{"sum", s.i}});
          else if constexpr (std::is_same_v<T, Point::CopyIndex>)
            steps.push_back({{"copy", s.n}});
          else if constexpr (std::is_same_v<T, Point::AtInfinity>)
            steps.push_back("inf");
          else if constexpr (std::is_same_v<T, Point::LeafIndex>)
            steps.push_back({{"leaf", s.i}});
          else if constexpr (std::is_same_v<T, Point::OrdinalPoint>)
            steps.push_back({{"ord", print(s.o)}});
          else if constexpr (std::is_same_v<T, Point::CantorPrefix>)
            steps.push_back({{"bits", s.bits}, {"zero_tail", s.zero_tail}});
          else
            steps.push_back({{"x", s.x.str()}});
        },
        st);
  return steps;
}

inline Point point_from_json(const nlohmann::json& j) {
  Point p;
  for (const auto& st : j) {
    if (st.is_string() && st.get<std::string>() == "inf") {
      p.path.push_back(Point::AtInfinity{});
    } else if (st.contains("sum")) {
      p.path.push_back(Point::SumBranch{st["sum"].get<size_t>()});
    } else if (st.contains("copy")) {
      p.path.push_back(Point::CopyIndex{st["copy"].get<long long>()});
    } else if (st.contains("leaf")) {
      p.path.push_back(Point::LeafIndex{st["leaf"].get<long long>()});
    } else if (st.contains("ord")) {
      p.path.push_back(Point::OrdinalPoint{parse_ordinal(st["ord"].get<std::string>())});
    } else if (st.contains("bits")) {
      p.path.push_back(Point::CantorPrefix{st["bits"].get<std::string>(),
                                           st.value("zero_tail", true)});
    } else if (st.contains("x")) {
      p.path.push_back(Point::UnitCoord{Rational::parse(st["x"].get<std::string>())});
    } else {
      throw InvalidPoint("unrecognized path step in JSON");
    }
  }
  return p;
}

// Is p a point of S? Works on canonical trees and on raw interval atoms.
inline bool valid_point(const SpaceP& s, const Point& p) {
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Space::EmptyS>)
          return false;
        else if constexpr (std::is_same_v<T, Space::Fin>) {
          if (p.path.size() != 1) return false;
          const auto* l = std::get_if<Point::LeafIndex>(&p.path[0]);
          return l && l->i >= 1 && l->i <= n.n;
        } else if constexpr (std::is_same_v<T, Space::Interval>) {
          if (p.path.size() != 1) return false;
          const auto* o = std::get_if<Point::OrdinalPoint>(&p.path[0]);
          return o && !o->o.is_zero() && o->o <= mul_nat(omega_pow(n.alpha), n.m);
        } else if constexpr (std::is_same_v<T, Space::CantorA>) {
          if (p.path.size() != 1) return false;
          const auto* c = std::get_if<Point::CantorPrefix>(&p.path[0]);
          if (!c || !c->zero_tail) return false;
          for (char b : c->bits)
            if (b != '0' && b != '1') return false;
          return true;
        } else if constexpr (std::is_same_v<T, Space::UnitA>) {
          if (p.path.size() != 1) return false;
          const auto* u = std::get_if<Point::UnitCoord>(&p.path[0]);
          return u && Rational(0) <= u->x && u->x <= Rational(1);
        } else if constexpr (std::is_same_v<T, Space::SumN>) {
          if (p.path.empty()) return false;
          const auto* b = std::get_if<Point::SumBranch>(&p.path[0]);
          return b && b->i < n.parts.size() && valid_point(n.parts[b->i], p.child());
        } else if constexpr (std::is_same_v<T, Space::OnePointN>) {
          if (p.path.empty()) return false;
          if (std::holds_alternative<Point::AtInfinity>(p.path[0])) return p.path.size() == 1;
          const auto* c = std::get_if<Point::CopyIndex>(&p.path[0]);
          return c && c->n >= 1 && valid_point(member_space(n, c->n), p.child());
        } else {
          return false;  // symbolic atoms carry no concrete points
        }
      },
      s->node);
}

// --- interval points as ordinals ---------------------------------------------
//
// Order isomorphism between [1, w^a * m] and the canonical tree of I(a, m):
//   m > 1:       part i (0-based) is the segment (w^a * i, w^a * (i+1)]
//   a = b+1:     copy n is the segment (w^b * (n-1), w^b * n]; inf is w^a
//   a limit:     copy 1 is [1, w^(b_1)]; copy n >= 2 is (w^(b_{n-1}), w^(b_n)]
//                with b_n = fund_seq(a, n); inf is w^a

inline Ordinal tree_point_to_ordinal(const Ordinal& alpha, long long m, const Point& p);

inline Ordinal tree_point_to_ordinal_single(const Ordinal& alpha, const Point& p) {
  OrdinalClass c = classify(alpha);
  if (c.kind == OrdinalClass::Zero) {
    const auto* l = std::get_if<Point::LeafIndex>(&p.path[0]);
    if (!l || p.path.size() != 1 || l->i != 1) throw InvalidPoint("expected leaf1");
    return Ordinal::from_nat(1);
  }
  if (p.path.empty()) throw InvalidPoint("path ends inside a one-point node");
  if (std::holds_alternative<Point::AtInfinity>(p.path[0])) {
    if (p.path.size() != 1) throw InvalidPoint("path continues past inf");
    return omega_pow(alpha);
  }
  const auto* cp = std::get_if<Point::CopyIndex>(&p.path[0]);
  if (!cp || cp->n < 1) throw InvalidPoint("expected copy index");
  if (c.kind == OrdinalClass::Successor) {
    Ordinal inner = tree_point_to_ordinal_single(c.pred, p.child());
    if (cp->n == 1) return inner;
    return add(mul_nat(omega_pow(c.pred), cp->n - 1), inner);
  }
  Ordinal bn = fund_seq(alpha, cp->n);
  Ordinal inner = tree_point_to_ordinal_single(bn, p.child());
  if (cp->n == 1) return inner;
  return add(omega_pow(fund_seq(alpha, cp->n - 1)), inner);
}

inline Ordinal tree_point_to_ordinal(const Ordinal& alpha, long long m, const Point& p) {
  if (alpha.is_zero()) {
    const auto* l = std::get_if<Point::LeafIndex>(&p.path.at(0));
    if (!l || p.path.size() != 1 || l->i < 1 || l->i > m) throw InvalidPoint("expected leaf");
    return Ordinal::from_nat(l->i);
  }
  if (m == 1) return tree_point_to_ordinal_single(alpha, p);
  const auto* b = std::get_if<Point::SumBranch>(&p.path[0]);
  if (!b || b->i >= (size_t)m) throw InvalidPoint("expected sum branch");
  Ordinal inner = tree_point_to_ordinal_single(alpha, p.child());
  if (b->i == 0) return inner;
  return add(mul_nat(omega_pow(alpha), (long long)b->i), inner);
}

inline Point ordinal_to_tree_point_single(const Ordinal& alpha, const Ordinal& o);

inline Point ordinal_to_tree_point(const Ordinal& alpha, long long m, const Ordinal& o) {
  if (o.is_zero() || mul_nat(omega_pow(alpha), m) < o)
    throw InvalidPoint("ordinal out of range");
  if (alpha.is_zero()) return Point::of(Point::LeafIndex{*o.as_nat()});
  if (m == 1) return ordinal_to_tree_point_single(alpha, o);
  Ordinal block = omega_pow(alpha);
  long long i = 0;  // part index: largest i with w^a * i < o
  while (i + 1 < m && mul_nat(block, i + 1) < o) ++i;
  Ordinal rest = i == 0 ? o : left_subtract(mul_nat(block, i), o);
  return ordinal_to_tree_point_single(alpha, rest).prepend(Point::SumBranch{(size_t)i});
}

inline Point ordinal_to_tree_point_single(const Ordinal& alpha, const Ordinal& o) {
  if (o.is_zero() || omega_pow(alpha) < o) throw InvalidPoint("ordinal out of range");
  OrdinalClass c = classify(alpha);
  if (c.kind == OrdinalClass::Zero) return Point::of(Point::LeafIndex{1});
  if (o == omega_pow(alpha)) return Point::of(Point::AtInfinity{});
  if (c.kind == OrdinalClass::Successor) {
    // o < w^(b+1): split o = w^b * k + tail with tail < w^b
    Ordinal block = omega_pow(c.pred);
    long long k = 0;
    Ordinal tail = o;
    if (!o.terms().empty() && o.terms()[0].exp == c.pred) {
      k = o.terms()[0].coeff;
      tail = left_subtract(mul_nat(block, k), o);
    }
    long long copy = tail.is_zero() ? k : k + 1;
    Ordinal inner = tail.is_zero() ? block : tail;
    return ordinal_to_tree_point_single(c.pred, inner).prepend(Point::CopyIndex{copy});
  }
  // limit: least n with o <= w^(fund_seq(alpha, n))
  long long n = 1;
  while (omega_pow(fund_seq(alpha, n)) < o) ++n;
  Ordinal inner = n == 1 ? o : left_subtract(omega_pow(fund_seq(alpha, n - 1)), o);
  return ordinal_to_tree_point_single(fund_seq(alpha, n), inner).prepend(Point::CopyIndex{n});
}

// --- derived-set membership --------------------------------------------------

// Does the compactifying point of a one-point node over `member` survive beta
// derivatives?
inline bool infinity_survives(const SpaceP& member, const Ordinal& beta) {
  HeightInfo h = height_info(member);
  return h.kind != HeightInfo::Representable || beta <= h.value;
}

// p in S^(beta)? Interval and ramp points reduce to CNF divisibility: an
// ordinal o in [1, w^a * m] lies in the beta-th derivative iff w^beta divides
// o, i.e. its least CNF exponent is >= beta.
inline bool ordinal_in_derived(const Ordinal& o, const Ordinal& beta) {
  if (beta.is_zero()) return true;
  if (o.is_zero()) return false;
  return o.terms().back().exp >= beta;
}

inline bool in_derived(const SpaceP& s, const Ordinal& beta, const Point& p) {
  if (!valid_point(s, p)) return false;
  if (beta.is_zero()) return true;
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Space::Fin>)
          return false;
        else if constexpr (std::is_same_v<T, Space::Interval>)
          return ordinal_in_derived(std::get<Point::OrdinalPoint>(p.path[0]).o, beta);
        else if constexpr (std::is_same_v<T, Space::CantorA> || std::is_same_v<T, Space::UnitA>)
          return true;
        else if constexpr (std::is_same_v<T, Space::SumN>)
          return in_derived(n.parts[std::get<Point::SumBranch>(p.path[0]).i], beta, p.child());
        else if constexpr (std::is_same_v<T, Space::OnePointN>) {
          if (std::holds_alternative<Point::AtInfinity>(p.path[0])) {
            if (const auto* r = std::get_if<Space::Ramp>(&n.family))
              return beta <= r->alpha;
            return infinity_survives(std::get<Space::Uniform>(n.family).member, beta);
          }
          long long copy = std::get<Point::CopyIndex>(p.path[0]).n;
          return in_derived(member_space(n, copy), beta, p.child());
        } else {
          return false;
        }
      },
      s->node);
}

// The point of derived(S, beta) that p maps to, for p in S^(beta). Mirrors
// the closed-form derivative, including sum collapse.
inline Point to_derived_point(const SpaceP& s, const Ordinal& beta, const Point& p) {
  if (!in_derived(s, beta, p)) throw InvalidPoint("point not in the derivative");
  if (beta.is_zero()) return p;
  return std::visit(
      [&](const auto& n) -> Point {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Space::Interval>) {
          // divide out w^beta exponentwise
          const Ordinal& o = std::get<Point::OrdinalPoint>(p.path[0]).o;
          std::vector<std::pair<Ordinal, long long>> ts;
          for (const auto& t : o.terms()) ts.push_back({left_subtract(beta, t.exp), t.coeff});
          Ordinal q = Ordinal::make(ts);
          Ordinal rest = left_subtract(beta, n.alpha);
          if (rest.is_zero()) return Point::of(Point::LeafIndex{*q.as_nat()});
          return Point::of(Point::OrdinalPoint{q});
        } else if constexpr (std::is_same_v<T, Space::CantorA> || std::is_same_v<T, Space::UnitA>) {
          return p;
        } else if constexpr (std::is_same_v<T, Space::SumN>) {
          size_t branch = std::get<Point::SumBranch>(p.path[0]).i;
          size_t new_index = 0;
          size_t survivors = 0;
          for (size_t i = 0; i < n.parts.size(); ++i) {
            if (is_empty_space(derived(n.parts[i], beta))) continue;
            if (i < branch) ++new_index;
            ++survivors;
          }
          Point inner = to_derived_point(n.parts[branch], beta, p.child());
          if (survivors == 1) return inner;
          return inner.prepend(Point::SumBranch{new_index});
        } else if constexpr (std::is_same_v<T, Space::OnePointN>) {
          if (const auto* r = std::get_if<Space::Ramp>(&n.family)) {
            Ordinal o = tree_point_to_ordinal_single(r->alpha, p);
            SpaceP d = derived_interval(r->alpha, 1, beta);
            std::vector<std::pair<Ordinal, long long>> ts;
            for (const auto& t : o.terms()) ts.push_back({left_subtract(beta, t.exp), t.coeff});
            Ordinal q = Ordinal::make(ts);
            if (std::holds_alternative<Space::Fin>(d->node))
              return Point::of(Point::LeafIndex{*q.as_nat()});
            return Point::of(Point::OrdinalPoint{q});
          }
          const SpaceP& member = std::get<Space::Uniform>(n.family).member;
          bool member_alive = !is_empty_space(derived(member, beta));
          if (std::holds_alternative<Point::AtInfinity>(p.path[0])) {
            if (member_alive) return Point::of(Point::AtInfinity{});
            return Point::of(Point::LeafIndex{1});  // derivative collapsed to fin(1)
          }
          long long copy = std::get<Point::CopyIndex>(p.path[0]).n;
          Point inner = to_derived_point(member, beta, p.child());
          return inner.prepend(Point::CopyIndex{copy});
        } else {
          throw InvalidPoint("no derivative points on this node");
        }
      },
      s->node);
}

// Canonical sample points: the first point of S in its leftmost-descent order,
// and a point of the top derivative for scattered trees.
inline Point first_point(const SpaceP& s) {
  return std::visit(
      [&](const auto& n) -> Point {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Space::Fin>)
          return Point::of(Point::LeafIndex{1});
        else if constexpr (std::is_same_v<T, Space::Interval>)
          return Point::of(Point::OrdinalPoint{Ordinal::from_nat(1)});
        else if constexpr (std::is_same_v<T, Space::CantorA>)
          return Point::of(Point::CantorPrefix{"", true});
        else if constexpr (std::is_same_v<T, Space::UnitA>)
          return Point::of(Point::UnitCoord{Rational(0)});
        else if constexpr (std::is_same_v<T, Space::SumN>)
          return first_point(n.parts[0]).prepend(Point::SumBranch{0});
        else if constexpr (std::is_same_v<T, Space::OnePointN>)
          return Point::of(Point::AtInfinity{});
        else
          throw InvalidPoint("space has no representable points");
      },
      s->node);
}

// A point of maximal Cantor-Bendixson rank (scattered constructive S).
inline Point top_point(const SpaceP& s) {
  return std::visit(
      [&](const auto& n) -> Point {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Space::Fin>)
          return Point::of(Point::LeafIndex{n.n});
        else if constexpr (std::is_same_v<T, Space::Interval>)
          return Point::of(Point::OrdinalPoint{mul_nat(omega_pow(n.alpha), n.m)});
        else if constexpr (std::is_same_v<T, Space::SumN>) {
          size_t best = 0;
          Ordinal best_h;
          for (size_t i = 0; i < n.parts.size(); ++i) {
            HeightInfo h = height_info(n.parts[i]);
            if (h.kind != HeightInfo::Representable) throw NotScattered();
            if (i == 0 || best_h < h.value) { best = i; best_h = h.value; }
          }
          return top_point(n.parts[best]).prepend(Point::SumBranch{best});
        } else if constexpr (std::is_same_v<T, Space::OnePointN>)
          return Point::of(Point::AtInfinity{});
        else
          throw NotScattered();
      },
      s->node);
}

}  // namespace ck

#endif

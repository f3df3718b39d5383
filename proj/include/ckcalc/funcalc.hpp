#ifndef CKCALC_FUNCALC_HPP
#define CKCALC_FUNCALC_HPP

#include <functional>

#include "region.hpp"

namespace ck {

struct SpaceMismatch : std::runtime_error {
  explicit SpaceMismatch(const std::string& msg)
      : std::runtime_error("space mismatch: " + msg) {}
};
struct PrefixTooShort : std::runtime_error {
  PrefixTooShort()
      : std::runtime_error("Cantor prefix shorter than the function's cylinder depth") {}
};

// Continuous function on a canonical tree, exactly representable: rational
// values, finitely many explicit children. A OnePointFn takes the value `tail`
// at infinity and constantly `tail` on every copy without a stored child, so
// the Lemma-Form decomposition g = a_g*1 + sum g_gamma is finite by
// construction. Children equal to the constant tail are always pruned.
class FunctionRep {
public:
  struct Node;

  struct LeafVec { std::vector<Rational> values; };       // fin(n), 1-based points
  struct SumFn { std::vector<FunctionRep> parts; };
  struct OnePointFn {
    Rational tail;
    std::map<long long, FunctionRep> children;
  };
  struct CantorFn {                                       // 2^depth cylinder values
    int depth;
    std::vector<Rational> values;
  };

  FunctionRep();

  static FunctionRep leaf(std::vector<Rational> values);
  static FunctionRep sum(std::vector<FunctionRep> parts);
  static FunctionRep onepoint(Rational tail, std::map<long long, FunctionRep> children);
  static FunctionRep cantor(int depth, std::vector<Rational> values);

  const Node& node() const;

private:
  explicit FunctionRep(Node n);
  std::shared_ptr<const Node> n_;
};

struct FunctionRep::Node {
  std::variant<LeafVec, SumFn, OnePointFn, CantorFn> v;
};

inline FunctionRep::FunctionRep(Node n)
    : n_(std::make_shared<const Node>(std::move(n))) {}
inline FunctionRep::FunctionRep() : FunctionRep(Node{LeafVec{}}) {}
inline const FunctionRep::Node& FunctionRep::node() const { return *n_; }
inline FunctionRep FunctionRep::leaf(std::vector<Rational> values) {
  return FunctionRep(Node{LeafVec{std::move(values)}});
}
inline FunctionRep FunctionRep::sum(std::vector<FunctionRep> parts) {
  return FunctionRep(Node{SumFn{std::move(parts)}});
}
inline FunctionRep FunctionRep::cantor(int depth, std::vector<Rational> values) {
  if (values.size() != (size_t)1 << depth)
    throw std::invalid_argument("CantorFn needs 2^depth values");
  return FunctionRep(Node{CantorFn{depth, std::move(values)}});
}

// Constant value of f, if f is constant by structure.
inline std::optional<Rational> as_const(const FunctionRep& f) {
  return std::visit(
      [&](const auto& n) -> std::optional<Rational> {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, FunctionRep::LeafVec>) {
          if (n.values.empty()) return std::nullopt;
          for (const auto& v : n.values)
            if (v != n.values[0]) return std::nullopt;
          return n.values[0];
        } else if constexpr (std::is_same_v<T, FunctionRep::SumFn>) {
          if (n.parts.empty()) return std::nullopt;
          auto c0 = as_const(n.parts[0]);
          if (!c0) return std::nullopt;
          for (size_t i = 1; i < n.parts.size(); ++i)
            if (as_const(n.parts[i]) != c0) return std::nullopt;
          return c0;
        } else if constexpr (std::is_same_v<T, FunctionRep::OnePointFn>) {
          if (!n.children.empty()) return std::nullopt;
          return n.tail;
        } else {
          for (const auto& v : n.values)
            if (v != n.values[0]) return std::nullopt;
          return n.values[0];
        }
      },
      f.node().v);
}

inline FunctionRep FunctionRep::onepoint(Rational tail,
                                         std::map<long long, FunctionRep> children) {
  for (auto it = children.begin(); it != children.end();) {
    auto c = as_const(it->second);
    if (c && *c == tail) it = children.erase(it);
    else ++it;
  }
  return FunctionRep(Node{OnePointFn{std::move(tail), std::move(children)}});
}

// --- construction and shape --------------------------------------------------

inline FunctionRep const_fn(const SpaceP& s, const Rational& c) {
  return std::visit(
      [&](const auto& n) -> FunctionRep {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Space::Fin>)
          return FunctionRep::leaf(std::vector<Rational>(n.n, c));
        else if constexpr (std::is_same_v<T, Space::SumN>) {
          std::vector<FunctionRep> parts;
          for (const auto& p : n.parts) parts.push_back(const_fn(p, c));
          return FunctionRep::sum(std::move(parts));
        } else if constexpr (std::is_same_v<T, Space::OnePointN>)
          return FunctionRep::onepoint(c, {});
        else if constexpr (std::is_same_v<T, Space::CantorA>)
          return FunctionRep::cantor(0, {c});
        else
          throw SpaceMismatch("functions live on canonical trees of fin/sum/op/cantor");
      },
      s->node);
}

inline bool shape_ok(const SpaceP& s, const FunctionRep& f) {
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Space::Fin>) {
          const auto* l = std::get_if<FunctionRep::LeafVec>(&f.node().v);
          return l && (long long)l->values.size() == n.n;
        } else if constexpr (std::is_same_v<T, Space::SumN>) {
          const auto* sf = std::get_if<FunctionRep::SumFn>(&f.node().v);
          if (!sf || sf->parts.size() != n.parts.size()) return false;
          for (size_t i = 0; i < n.parts.size(); ++i)
            if (!shape_ok(n.parts[i], sf->parts[i])) return false;
          return true;
        } else if constexpr (std::is_same_v<T, Space::OnePointN>) {
          const auto* of = std::get_if<FunctionRep::OnePointFn>(&f.node().v);
          if (!of) return false;
          for (const auto& [c, child] : of->children)
            if (c < 1 || !shape_ok(member_space(n, c), child)) return false;
          return true;
        } else if constexpr (std::is_same_v<T, Space::CantorA>) {
          const auto* cf = std::get_if<FunctionRep::CantorFn>(&f.node().v);
          return cf && cf->depth >= 0 && cf->values.size() == (size_t)1 << cf->depth;
        } else {
          return false;
        }
      },
      s->node);
}

// --- evaluation --------------------------------------------------------------

inline Rational eval(const SpaceP& s, const FunctionRep& f, const Point& p) {
  return std::visit(
      [&](const auto& n) -> Rational {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Space::Fin>) {
          const auto& l = std::get<FunctionRep::LeafVec>(f.node().v);
          long long i = std::get<Point::LeafIndex>(p.path.at(0)).i;
          if (i < 1 || i > (long long)l.values.size()) throw InvalidPoint("leaf out of range");
          return l.values[i - 1];
        } else if constexpr (std::is_same_v<T, Space::SumN>) {
          const auto& sf = std::get<FunctionRep::SumFn>(f.node().v);
          size_t b = std::get<Point::SumBranch>(p.path.at(0)).i;
          return eval(n.parts.at(b), sf.parts.at(b), p.child());
        } else if constexpr (std::is_same_v<T, Space::OnePointN>) {
          const auto& of = std::get<FunctionRep::OnePointFn>(f.node().v);
          if (std::holds_alternative<Point::AtInfinity>(p.path.at(0))) return of.tail;
          long long c = std::get<Point::CopyIndex>(p.path.at(0)).n;
          auto it = of.children.find(c);
          if (it == of.children.end()) return of.tail;
          return eval(member_space(n, c), it->second, p.child());
        } else if constexpr (std::is_same_v<T, Space::CantorA>) {
          const auto& cf = std::get<FunctionRep::CantorFn>(f.node().v);
          const auto& cp = std::get<Point::CantorPrefix>(p.path.at(0));
          if ((long long)cp.bits.size() < cf.depth && !cp.zero_tail) throw PrefixTooShort();
          std::string bits = detail::point_bits(cp, cf.depth);
          size_t idx = 0;
          for (char b : bits) idx = idx * 2 + (b - '0');
          return cf.values[idx];
        } else {
          throw SpaceMismatch("eval on unsupported space node");
        }
      },
      s->node);
}

// --- pointwise operations ----------------------------------------------------

namespace detail {

inline std::vector<Rational> refine_cylinders(const std::vector<Rational>& vs, int from, int to) {
  std::vector<Rational> out;
  out.reserve((size_t)1 << to);
  size_t rep = (size_t)1 << (to - from);
  for (const auto& v : vs)
    for (size_t i = 0; i < rep; ++i) out.push_back(v);
  return out;
}

}  // namespace detail

inline FunctionRep zip(const SpaceP& s, const FunctionRep& f, const FunctionRep& g,
                       const std::function<Rational(const Rational&, const Rational&)>& op) {
  return std::visit(
      [&](const auto& n) -> FunctionRep {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Space::Fin>) {
          const auto& a = std::get<FunctionRep::LeafVec>(f.node().v).values;
          const auto& b = std::get<FunctionRep::LeafVec>(g.node().v).values;
          std::vector<Rational> out;
          for (size_t i = 0; i < a.size(); ++i) out.push_back(op(a[i], b[i]));
          return FunctionRep::leaf(std::move(out));
        } else if constexpr (std::is_same_v<T, Space::SumN>) {
          const auto& a = std::get<FunctionRep::SumFn>(f.node().v).parts;
          const auto& b = std::get<FunctionRep::SumFn>(g.node().v).parts;
          std::vector<FunctionRep> out;
          for (size_t i = 0; i < n.parts.size(); ++i)
            out.push_back(zip(n.parts[i], a[i], b[i], op));
          return FunctionRep::sum(std::move(out));
        } else if constexpr (std::is_same_v<T, Space::OnePointN>) {
          const auto& a = std::get<FunctionRep::OnePointFn>(f.node().v);
          const auto& b = std::get<FunctionRep::OnePointFn>(g.node().v);
          std::set<long long> keys;
          for (const auto& [c, ch] : a.children) keys.insert(c);
          for (const auto& [c, ch] : b.children) keys.insert(c);
          std::map<long long, FunctionRep> out;
          for (long long c : keys) {
            SpaceP mem = member_space(n, c);
            auto ita = a.children.find(c);
            auto itb = b.children.find(c);
            FunctionRep fa = ita != a.children.end() ? ita->second : const_fn(mem, a.tail);
            FunctionRep fb = itb != b.children.end() ? itb->second : const_fn(mem, b.tail);
            out.emplace(c, zip(mem, fa, fb, op));
          }
          return FunctionRep::onepoint(op(a.tail, b.tail), std::move(out));
        } else if constexpr (std::is_same_v<T, Space::CantorA>) {
          const auto& a = std::get<FunctionRep::CantorFn>(f.node().v);
          const auto& b = std::get<FunctionRep::CantorFn>(g.node().v);
          int d = std::max(a.depth, b.depth);
          auto av = detail::refine_cylinders(a.values, a.depth, d);
          auto bv = detail::refine_cylinders(b.values, b.depth, d);
          std::vector<Rational> out;
          for (size_t i = 0; i < av.size(); ++i) out.push_back(op(av[i], bv[i]));
          return FunctionRep::cantor(d, std::move(out));
        } else {
          throw SpaceMismatch("zip on unsupported space node");
        }
      },
      s->node);
}

inline FunctionRep fmap(const SpaceP& s, const FunctionRep& f,
                        const std::function<Rational(const Rational&)>& op) {
  return zip(s, f, f, [&](const Rational& a, const Rational&) { return op(a); });
}

inline FunctionRep add(const SpaceP& s, const FunctionRep& f, const FunctionRep& g) {
  return zip(s, f, g, [](const Rational& a, const Rational& b) { return a + b; });
}
inline FunctionRep sub(const SpaceP& s, const FunctionRep& f, const FunctionRep& g) {
  return zip(s, f, g, [](const Rational& a, const Rational& b) { return a - b; });
}
inline FunctionRep mul(const SpaceP& s, const FunctionRep& f, const FunctionRep& g) {
  return zip(s, f, g, [](const Rational& a, const Rational& b) { return a * b; });
}
inline FunctionRep scale(const SpaceP& s, const FunctionRep& f, const Rational& c) {
  return fmap(s, f, [&](const Rational& a) { return a * c; });
}
inline FunctionRep pointwise_max(const SpaceP& s, const FunctionRep& f, const FunctionRep& g) {
  return zip(s, f, g, [](const Rational& a, const Rational& b) { return Rational::max(a, b); });
}
inline FunctionRep pointwise_min(const SpaceP& s, const FunctionRep& f, const FunctionRep& g) {
  return zip(s, f, g, [](const Rational& a, const Rational& b) { return Rational::min(a, b); });
}
inline FunctionRep pos_part(const SpaceP& s, const FunctionRep& f) {
  return fmap(s, f, [](const Rational& a) { return pos_part(a); });
}
inline FunctionRep neg_part(const SpaceP& s, const FunctionRep& f) {
  return fmap(s, f, [](const Rational& a) { return neg_part(a); });
}

// --- exact norms -------------------------------------------------------------
//
// Representable functions attain their extrema: every node carries finitely
// many explicit values plus a tail, so max/min fold structurally. This
// realizes the special-form norm formulas exactly.

inline Rational max_val(const FunctionRep& f) {
  return std::visit(
      [&](const auto& n) -> Rational {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, FunctionRep::LeafVec> ||
                      std::is_same_v<T, FunctionRep::CantorFn>) {
          Rational m = n.values.at(0);
          for (const auto& v : n.values) m = Rational::max(m, v);
          return m;
        } else if constexpr (std::is_same_v<T, FunctionRep::SumFn>) {
          Rational m = max_val(n.parts.at(0));
          for (const auto& p : n.parts) m = Rational::max(m, max_val(p));
          return m;
        } else {
          Rational m = n.tail;
          for (const auto& [c, child] : n.children) m = Rational::max(m, max_val(child));
          return m;
        }
      },
      f.node().v);
}

inline Rational min_val(const FunctionRep& f) {
  return std::visit(
      [&](const auto& n) -> Rational {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, FunctionRep::LeafVec> ||
                      std::is_same_v<T, FunctionRep::CantorFn>) {
          Rational m = n.values.at(0);
          for (const auto& v : n.values) m = Rational::min(m, v);
          return m;
        } else if constexpr (std::is_same_v<T, FunctionRep::SumFn>) {
          Rational m = min_val(n.parts.at(0));
          for (const auto& p : n.parts) m = Rational::min(m, min_val(p));
          return m;
        } else {
          Rational m = n.tail;
          for (const auto& [c, child] : n.children) m = Rational::min(m, min_val(child));
          return m;
        }
      },
      f.node().v);
}

inline Rational norm_pos(const FunctionRep& f) { return pos_part(max_val(f)); }
inline Rational norm_neg(const FunctionRep& f) { return pos_part(-min_val(f)); }
inline Rational norm(const FunctionRep& f) {
  return Rational::max(norm_pos(f), norm_neg(f));
}

inline bool is_zero_fn(const FunctionRep& f) {
  return max_val(f).is_zero() && min_val(f).is_zero();
}
inline bool fn_eq(const SpaceP& s, const FunctionRep& f, const FunctionRep& g) {
  return is_zero_fn(sub(s, f, g));
}

// Lemma-Form decomposition of a one-point function: a_g = g(infinity) and
// g_gamma = (stored child) - a_g, supported on finitely many copies.
inline std::pair<Rational, std::map<long long, FunctionRep>> decompose(
    const SpaceP& s, const FunctionRep& f) {
  const auto& op = std::get<Space::OnePointN>(s->node);
  const auto& of = std::get<FunctionRep::OnePointFn>(f.node().v);
  std::map<long long, FunctionRep> parts;
  for (const auto& [c, child] : of.children) {
    SpaceP mem = member_space(op, c);
    parts.emplace(c, sub(mem, child, const_fn(mem, of.tail)));
  }
  return {of.tail, std::move(parts)};
}

inline FunctionRep recompose(const SpaceP& s, const Rational& a,
                             const std::map<long long, FunctionRep>& parts) {
  const auto& op = std::get<Space::OnePointN>(s->node);
  std::map<long long, FunctionRep> children;
  for (const auto& [c, g] : parts) {
    SpaceP mem = member_space(op, c);
    children.emplace(c, add(mem, g, const_fn(mem, a)));
  }
  return FunctionRep::onepoint(a, std::move(children));
}

// --- indicators and support --------------------------------------------------

inline FunctionRep indicator(const SpaceP& s, const ClopenRegion& r) {
  return std::visit(
      [&](const auto& rn) -> FunctionRep {
        using R = std::decay_t<decltype(rn)>;
        if constexpr (std::is_same_v<R, ClopenRegion::Whole>)
          return const_fn(s, Rational(1));
        else if constexpr (std::is_same_v<R, ClopenRegion::NoneS>)
          return const_fn(s, Rational(0));
        else if constexpr (std::is_same_v<R, ClopenRegion::LeafSelect>) {
          long long n = std::get<Space::Fin>(s->node).n;
          std::vector<Rational> vs;
          for (long long i = 1; i <= n; ++i) vs.push_back(Rational(rn.indices.count(i) ? 1 : 0));
          return FunctionRep::leaf(std::move(vs));
        } else if constexpr (std::is_same_v<R, ClopenRegion::SumSelect>) {
          const auto& parts = std::get<Space::SumN>(s->node).parts;
          std::vector<FunctionRep> out;
          for (size_t i = 0; i < parts.size(); ++i) {
            auto it = rn.branches.find(i);
            out.push_back(it == rn.branches.end() ? const_fn(parts[i], Rational(0))
                                                  : indicator(parts[i], it->second));
          }
          return FunctionRep::sum(std::move(out));
        } else if constexpr (std::is_same_v<R, ClopenRegion::OnePointSelect>) {
          const auto& op = std::get<Space::OnePointN>(s->node);
          std::map<long long, FunctionRep> children;
          for (const auto& [c, sub] : rn.children)
            children.emplace(c, indicator(member_space(op, c), sub));
          return FunctionRep::onepoint(Rational(rn.include_infinity ? 1 : 0),
                                       std::move(children));
        } else {
          auto ps = detail::normalize_prefixes(rn.prefixes);
          int d = 0;
          for (const auto& p : ps) d = std::max<int>(d, (int)p.size());
          size_t cnt = (size_t)1 << d;
          std::vector<Rational> vs(cnt, Rational(0));
          for (size_t i = 0; i < cnt; ++i) {
            std::string bits;
            for (int b = d - 1; b >= 0; --b) bits += char('0' + ((i >> b) & 1));
            for (const auto& p : ps)
              if (detail::prefix_of(p, bits)) vs[i] = Rational(1);
          }
          return FunctionRep::cantor(d, std::move(vs));
        }
      },
      r.node().v);
}

// Does f vanish identically outside r? Exact structural check.
inline bool is_supported_by(const SpaceP& s, const FunctionRep& f, const ClopenRegion& r) {
  FunctionRep outside = mul(s, f, indicator(s, complement(s, r)));
  return is_zero_fn(outside);
}

// --- probe points ------------------------------------------------------------

// Finite point set witnessing all attained values: every explicit leaf and
// cylinder, every infinity, and one default copy past the stored children.
inline void probe_points_into(const SpaceP& s, const FunctionRep& f, const Point& prefix,
                              std::vector<Point>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Space::Fin>) {
          for (long long i = 1; i <= n.n; ++i) {
            Point p = prefix;
            p.path.push_back(Point::LeafIndex{i});
            out.push_back(std::move(p));
          }
        } else if constexpr (std::is_same_v<T, Space::SumN>) {
          const auto& sf = std::get<FunctionRep::SumFn>(f.node().v);
          for (size_t i = 0; i < n.parts.size(); ++i) {
            Point p = prefix;
            p.path.push_back(Point::SumBranch{i});
            probe_points_into(n.parts[i], sf.parts[i], p, out);
          }
        } else if constexpr (std::is_same_v<T, Space::OnePointN>) {
          const auto& of = std::get<FunctionRep::OnePointFn>(f.node().v);
          Point pinf = prefix;
          pinf.path.push_back(Point::AtInfinity{});
          out.push_back(std::move(pinf));
          long long max_key = 0;
          for (const auto& [c, child] : of.children) {
            max_key = std::max(max_key, c);
            Point p = prefix;
            p.path.push_back(Point::CopyIndex{c});
            probe_points_into(member_space(n, c), child, p, out);
          }
          Point pdef = prefix;  // one copy on the pruned tail
          pdef.path.push_back(Point::CopyIndex{max_key + 1});
          Point fp = first_point(member_space(n, max_key + 1));
          pdef.path.insert(pdef.path.end(), fp.path.begin(), fp.path.end());
          out.push_back(std::move(pdef));
        } else if constexpr (std::is_same_v<T, Space::CantorA>) {
          const auto& cf = std::get<FunctionRep::CantorFn>(f.node().v);
          for (size_t i = 0; i < cf.values.size(); ++i) {
            std::string bits;
            for (int b = cf.depth - 1; b >= 0; --b) bits += char('0' + ((i >> b) & 1));
            Point p = prefix;
            p.path.push_back(Point::CantorPrefix{bits, true});
            out.push_back(std::move(p));
          }
        }
      },
      s->node);
}

inline std::vector<Point> probe_points(const SpaceP& s, const FunctionRep& f) {
  std::vector<Point> out;
  probe_points_into(s, f, Point{}, out);
  return out;
}

// --- serialization -----------------------------------------------------------

inline nlohmann::json fn_to_json(const FunctionRep& f) {
  return std::visit(
      [&](const auto& n) -> nlohmann::json {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, FunctionRep::LeafVec>) {
          nlohmann::json vs = nlohmann::json::array();
          for (const auto& v : n.values) vs.push_back(v.str());
          return {{"leaf", vs}};
        } else if constexpr (std::is_same_v<T, FunctionRep::SumFn>) {
          nlohmann::json ps = nlohmann::json::array();
          for (const auto& p : n.parts) ps.push_back(fn_to_json(p));
          return {{"sum", ps}};
        } else if constexpr (std::is_same_v<T, FunctionRep::OnePointFn>) {
          nlohmann::json cs = nlohmann::json::object();
          for (const auto& [c, child] : n.children) cs[std::to_string(c)] = fn_to_json(child);
          return {{"tail", n.tail.str()}, {"children", cs}};
        } else {
          nlohmann::json vs = nlohmann::json::array();
          for (const auto& v : n.values) vs.push_back(v.str());
          return {{"cantor", {{"depth", n.depth}, {"values", vs}}}};
        }
      },
      f.node().v);
}

inline FunctionRep fn_from_json(const nlohmann::json& j) {
  if (j.contains("leaf")) {
    std::vector<Rational> vs;
    for (const auto& v : j["leaf"]) vs.push_back(Rational::parse(v.get<std::string>()));
    return FunctionRep::leaf(std::move(vs));
  }
  if (j.contains("sum")) {
    std::vector<FunctionRep> ps;
    for (const auto& p : j["sum"]) ps.push_back(fn_from_json(p));
    return FunctionRep::sum(std::move(ps));
  }
  if (j.contains("tail")) {
    std::map<long long, FunctionRep> cs;
    for (const auto& [k, v] : j["children"].items()) cs.emplace(std::stoll(k), fn_from_json(v));
    return FunctionRep::onepoint(Rational::parse(j["tail"].get<std::string>()), std::move(cs));
  }
  if (j.contains("cantor")) {
    std::vector<Rational> vs;
    for (const auto& v : j["cantor"]["values"]) vs.push_back(Rational::parse(v.get<std::string>()));
    return FunctionRep::cantor(j["cantor"]["depth"].get<int>(), std::move(vs));
  }
  throw std::invalid_argument("unrecognized function JSON");
}

}  // namespace ck

#endif

#ifndef CKCALC_REGION_HPP
#define CKCALC_REGION_HPP

#include <map>
#include <set>

#include "canonical.hpp"

namespace ck {

struct InvalidRegion : std::runtime_error {
  explicit InvalidRegion(const std::string& msg) : std::runtime_error("invalid region: " + msg) {}
};

// A clopen subset of a canonical tree, given by a recursive selector. Inside a
// one-point node, copies without an explicit selector default to wholly
// included when include_infinity is set and wholly excluded otherwise — so the
// denoted set is automatically clopen (a clopen set contains the
// compactifying point iff it contains cofinitely many copies entirely).
class ClopenRegion {
public:
  struct Node;

  struct Whole {};
  struct NoneS {};
  struct LeafSelect { std::set<long long> indices; };            // 1-based
  struct SumSelect { std::map<size_t, ClopenRegion> branches; }; // absent = none
  struct OnePointSelect {
    std::map<long long, ClopenRegion> children;
    bool include_infinity;
  };
  struct CantorSel { std::vector<std::string> prefixes; };       // union of cylinders

  ClopenRegion();

  static ClopenRegion whole();
  static ClopenRegion none();
  static ClopenRegion leaf_select(std::set<long long> idx);
  static ClopenRegion sum_select(std::map<size_t, ClopenRegion> branches);
  static ClopenRegion onepoint_select(std::map<long long, ClopenRegion> children,
                                      bool include_infinity);
  static ClopenRegion cantor_sel(std::vector<std::string> prefixes);

  const Node& node() const;

private:
  explicit ClopenRegion(Node n);
  std::shared_ptr<const Node> n_;
};

struct ClopenRegion::Node {
  std::variant<Whole, NoneS, LeafSelect, SumSelect, OnePointSelect, CantorSel> v;
};

inline ClopenRegion::ClopenRegion(Node n)
    : n_(std::make_shared<const Node>(std::move(n))) {}
inline ClopenRegion::ClopenRegion() : ClopenRegion(Node{Whole{}}) {}
inline const ClopenRegion::Node& ClopenRegion::node() const { return *n_; }
inline ClopenRegion ClopenRegion::whole() { return ClopenRegion(Node{Whole{}}); }
inline ClopenRegion ClopenRegion::none() { return ClopenRegion(Node{NoneS{}}); }
inline ClopenRegion ClopenRegion::leaf_select(std::set<long long> idx) {
  return ClopenRegion(Node{LeafSelect{std::move(idx)}});
}
inline ClopenRegion ClopenRegion::sum_select(std::map<size_t, ClopenRegion> branches) {
  return ClopenRegion(Node{SumSelect{std::move(branches)}});
}
inline ClopenRegion ClopenRegion::onepoint_select(std::map<long long, ClopenRegion> children,
                                                  bool include_infinity) {
  return ClopenRegion(Node{OnePointSelect{std::move(children), include_infinity}});
}
inline ClopenRegion ClopenRegion::cantor_sel(std::vector<std::string> prefixes) {
  return ClopenRegion(Node{CantorSel{std::move(prefixes)}});
}

// --- cylinder prefix sets ----------------------------------------------------

namespace detail {

inline bool prefix_of(const std::string& p, const std::string& q) {
  return q.size() >= p.size() && q.compare(0, p.size(), p) == 0;
}

// Sort, drop covered prefixes, merge sibling pairs p0/p1 -> p.
inline std::vector<std::string> normalize_prefixes(std::vector<std::string> ps) {
  for (;;) {
    std::sort(ps.begin(), ps.end());
    std::vector<std::string> out;
    for (const auto& p : ps)
      if (out.empty() || !prefix_of(out.back(), p)) out.push_back(p);
    bool merged = false;
    for (size_t i = 0; i + 1 < out.size(); ++i) {
      const std::string &a = out[i], &b = out[i + 1];
      if (!a.empty() && a.size() == b.size() && a.back() == '0' && b.back() == '1' &&
          a.compare(0, a.size() - 1, b, 0, b.size() - 1) == 0) {
        out[i] = a.substr(0, a.size() - 1);
        out.erase(out.begin() + i + 1);
        merged = true;
        break;
      }
    }
    if (!merged) return out;
    ps = std::move(out);
  }
}

// Cylinders of q not covered by p.
inline std::vector<std::string> cylinder_subtract(const std::string& q, const std::string& p) {
  if (prefix_of(p, q)) return {};
  if (!prefix_of(q, p)) return {q};
  std::vector<std::string> out;
  for (size_t i = q.size(); i < p.size(); ++i) {
    std::string sib = p.substr(0, i);
    sib += p[i] == '0' ? '1' : '0';
    out.push_back(sib);
  }
  return out;
}

inline std::vector<std::string> prefixes_complement(const std::vector<std::string>& ps) {
  std::vector<std::string> acc = {""};
  for (const auto& p : ps) {
    std::vector<std::string> next;
    for (const auto& q : acc) {
      auto rest = cylinder_subtract(q, p);
      next.insert(next.end(), rest.begin(), rest.end());
    }
    acc = std::move(next);
  }
  return normalize_prefixes(acc);
}

inline std::vector<std::string> prefixes_intersect(const std::vector<std::string>& a,
                                                   const std::vector<std::string>& b) {
  std::vector<std::string> out;
  for (const auto& p : a)
    for (const auto& q : b) {
      if (prefix_of(p, q)) out.push_back(q);
      else if (prefix_of(q, p)) out.push_back(p);
    }
  return normalize_prefixes(out);
}

// The first `len` bits of a Cantor point.
inline std::string point_bits(const Point::CantorPrefix& c, size_t len) {
  std::string bits = c.bits;
  if (bits.size() < len) {
    if (!c.zero_tail) throw InvalidPoint("Cantor prefix too short to decide membership");
    bits.append(len - bits.size(), '0');
  }
  return bits.substr(0, len);
}

inline bool prefixes_contain(const std::vector<std::string>& ps, const Point::CantorPrefix& c) {
  for (const auto& p : ps)
    if (point_bits(c, p.size()) == p) return true;
  return false;
}

}  // namespace detail

// --- basic region predicates -------------------------------------------------

inline bool contains_point(const SpaceP& s, const ClopenRegion& r, const Point& p) {
  return std::visit(
      [&](const auto& rn) -> bool {
        using R = std::decay_t<decltype(rn)>;
        if constexpr (std::is_same_v<R, ClopenRegion::Whole>)
          return true;
        else if constexpr (std::is_same_v<R, ClopenRegion::NoneS>)
          return false;
        else if constexpr (std::is_same_v<R, ClopenRegion::LeafSelect>)
          return rn.indices.count(std::get<Point::LeafIndex>(p.path.at(0)).i) > 0;
        else if constexpr (std::is_same_v<R, ClopenRegion::SumSelect>) {
          size_t b = std::get<Point::SumBranch>(p.path.at(0)).i;
          auto it = rn.branches.find(b);
          if (it == rn.branches.end()) return false;
          return contains_point(std::get<Space::SumN>(s->node).parts[b], it->second, p.child());
        } else if constexpr (std::is_same_v<R, ClopenRegion::OnePointSelect>) {
          const auto& op = std::get<Space::OnePointN>(s->node);
          if (std::holds_alternative<Point::AtInfinity>(p.path.at(0)))
            return rn.include_infinity;
          long long copy = std::get<Point::CopyIndex>(p.path.at(0)).n;
          auto it = rn.children.find(copy);
          if (it == rn.children.end()) return rn.include_infinity;
          return contains_point(member_space(op, copy), it->second, p.child());
        } else {  // CantorSel
          return detail::prefixes_contain(rn.prefixes,
                                          std::get<Point::CantorPrefix>(p.path.at(0)));
        }
      },
      r.node().v);
}

inline bool region_empty(const SpaceP& s, const ClopenRegion& r) {
  return std::visit(
      [&](const auto& rn) -> bool {
        using R = std::decay_t<decltype(rn)>;
        if constexpr (std::is_same_v<R, ClopenRegion::Whole>)
          return is_empty_space(s);
        else if constexpr (std::is_same_v<R, ClopenRegion::NoneS>)
          return true;
        else if constexpr (std::is_same_v<R, ClopenRegion::LeafSelect>)
          return rn.indices.empty();
        else if constexpr (std::is_same_v<R, ClopenRegion::SumSelect>) {
          const auto& parts = std::get<Space::SumN>(s->node).parts;
          for (const auto& [i, sub] : rn.branches)
            if (!region_empty(parts.at(i), sub)) return false;
          return true;
        } else if constexpr (std::is_same_v<R, ClopenRegion::OnePointSelect>) {
          if (rn.include_infinity) return false;
          const auto& op = std::get<Space::OnePointN>(s->node);
          for (const auto& [c, sub] : rn.children)
            if (!region_empty(member_space(op, c), sub)) return false;
          return true;
        } else {
          return rn.prefixes.empty();
        }
      },
      r.node().v);
}

inline bool region_whole(const SpaceP& s, const ClopenRegion& r) {
  return std::visit(
      [&](const auto& rn) -> bool {
        using R = std::decay_t<decltype(rn)>;
        if constexpr (std::is_same_v<R, ClopenRegion::Whole>)
          return true;
        else if constexpr (std::is_same_v<R, ClopenRegion::NoneS>)
          return is_empty_space(s);
        else if constexpr (std::is_same_v<R, ClopenRegion::LeafSelect>) {
          long long n = std::get<Space::Fin>(s->node).n;
          for (long long i = 1; i <= n; ++i)
            if (!rn.indices.count(i)) return false;
          return true;
        } else if constexpr (std::is_same_v<R, ClopenRegion::SumSelect>) {
          const auto& parts = std::get<Space::SumN>(s->node).parts;
          for (size_t i = 0; i < parts.size(); ++i) {
            auto it = rn.branches.find(i);
            if (it == rn.branches.end() || !region_whole(parts[i], it->second)) return false;
          }
          return true;
        } else if constexpr (std::is_same_v<R, ClopenRegion::OnePointSelect>) {
          if (!rn.include_infinity) return false;
          const auto& op = std::get<Space::OnePointN>(s->node);
          for (const auto& [c, sub] : rn.children)
            if (!region_whole(member_space(op, c), sub)) return false;
          return true;
        } else {
          auto ps = detail::normalize_prefixes(rn.prefixes);
          return ps.size() == 1 && ps[0].empty();
        }
      },
      r.node().v);
}

// --- Boolean operations ------------------------------------------------------

inline ClopenRegion complement(const SpaceP& s, const ClopenRegion& r);
inline ClopenRegion intersect(const SpaceP& s, const ClopenRegion& a, const ClopenRegion& b);

// Expand Whole/None to the node-shaped selector matching s, so binary ops can
// recurse uniformly.
namespace detail {

inline ClopenRegion shaped(const SpaceP& s, bool full) {
  return std::visit(
      [&](const auto& n) -> ClopenRegion {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Space::Fin>) {
          std::set<long long> idx;
          if (full)
            for (long long i = 1; i <= n.n; ++i) idx.insert(i);
          return ClopenRegion::leaf_select(std::move(idx));
        } else if constexpr (std::is_same_v<T, Space::SumN>) {
          std::map<size_t, ClopenRegion> bs;
          if (full)
            for (size_t i = 0; i < n.parts.size(); ++i) bs.emplace(i, ClopenRegion::whole());
          return ClopenRegion::sum_select(std::move(bs));
        } else if constexpr (std::is_same_v<T, Space::OnePointN>) {
          return ClopenRegion::onepoint_select({}, full);
        } else if constexpr (std::is_same_v<T, Space::CantorA>) {
          std::vector<std::string> ps;
          if (full) ps.push_back("");
          return ClopenRegion::cantor_sel(std::move(ps));
        } else {
          return full ? ClopenRegion::whole() : ClopenRegion::none();
        }
      },
      s->node);
}

}  // namespace detail

inline ClopenRegion complement(const SpaceP& s, const ClopenRegion& r) {
  return std::visit(
      [&](const auto& rn) -> ClopenRegion {
        using R = std::decay_t<decltype(rn)>;
        if constexpr (std::is_same_v<R, ClopenRegion::Whole>)
          return ClopenRegion::none();
        else if constexpr (std::is_same_v<R, ClopenRegion::NoneS>)
          return ClopenRegion::whole();
        else if constexpr (std::is_same_v<R, ClopenRegion::LeafSelect>) {
          long long n = std::get<Space::Fin>(s->node).n;
          std::set<long long> idx;
          for (long long i = 1; i <= n; ++i)
            if (!rn.indices.count(i)) idx.insert(i);
          return ClopenRegion::leaf_select(std::move(idx));
        } else if constexpr (std::is_same_v<R, ClopenRegion::SumSelect>) {
          const auto& parts = std::get<Space::SumN>(s->node).parts;
          std::map<size_t, ClopenRegion> bs;
          for (size_t i = 0; i < parts.size(); ++i) {
            auto it = rn.branches.find(i);
            bs.emplace(i, it == rn.branches.end() ? ClopenRegion::whole()
                                                  : complement(parts[i], it->second));
          }
          return ClopenRegion::sum_select(std::move(bs));
        } else if constexpr (std::is_same_v<R, ClopenRegion::OnePointSelect>) {
          const auto& op = std::get<Space::OnePointN>(s->node);
          std::map<long long, ClopenRegion> cs;
          for (const auto& [c, sub] : rn.children)
            cs.emplace(c, complement(member_space(op, c), sub));
          return ClopenRegion::onepoint_select(std::move(cs), !rn.include_infinity);
        } else {
          return ClopenRegion::cantor_sel(detail::prefixes_complement(
              detail::normalize_prefixes(rn.prefixes)));
        }
      },
      r.node().v);
}

inline ClopenRegion intersect(const SpaceP& s, const ClopenRegion& a, const ClopenRegion& b) {
  if (std::holds_alternative<ClopenRegion::NoneS>(a.node().v) ||
      std::holds_alternative<ClopenRegion::NoneS>(b.node().v))
    return ClopenRegion::none();
  if (std::holds_alternative<ClopenRegion::Whole>(a.node().v)) return b;
  if (std::holds_alternative<ClopenRegion::Whole>(b.node().v)) return a;
  const auto& av = a.node().v;
  const auto& bv = b.node().v;
  if (const auto* al = std::get_if<ClopenRegion::LeafSelect>(&av)) {
    const auto& bl = std::get<ClopenRegion::LeafSelect>(bv);
    std::set<long long> idx;
    for (long long i : al->indices)
      if (bl.indices.count(i)) idx.insert(i);
    return ClopenRegion::leaf_select(std::move(idx));
  }
  if (const auto* as = std::get_if<ClopenRegion::SumSelect>(&av)) {
    const auto& bs = std::get<ClopenRegion::SumSelect>(bv);
    const auto& parts = std::get<Space::SumN>(s->node).parts;
    std::map<size_t, ClopenRegion> out;
    for (const auto& [i, sub] : as->branches) {
      auto it = bs.branches.find(i);
      if (it != bs.branches.end()) out.emplace(i, intersect(parts.at(i), sub, it->second));
    }
    return ClopenRegion::sum_select(std::move(out));
  }
  if (const auto* ao = std::get_if<ClopenRegion::OnePointSelect>(&av)) {
    const auto& bo = std::get<ClopenRegion::OnePointSelect>(bv);
    const auto& op = std::get<Space::OnePointN>(s->node);
    std::set<long long> keys;
    for (const auto& [c, sub] : ao->children) keys.insert(c);
    for (const auto& [c, sub] : bo.children) keys.insert(c);
    bool inf = ao->include_infinity && bo.include_infinity;
    std::map<long long, ClopenRegion> out;
    auto side = [](const ClopenRegion::OnePointSelect& o, long long c) {
      auto it = o.children.find(c);
      if (it != o.children.end()) return it->second;
      return o.include_infinity ? ClopenRegion::whole() : ClopenRegion::none();
    };
    for (long long c : keys) {
      ClopenRegion sub = intersect(member_space(op, c), side(*ao, c), side(bo, c));
      SpaceP mem = member_space(op, c);
      // drop entries matching the default side
      if (inf ? region_whole(mem, sub) : region_empty(mem, sub)) continue;
      out.emplace(c, std::move(sub));
    }
    return ClopenRegion::onepoint_select(std::move(out), inf);
  }
  const auto& ac = std::get<ClopenRegion::CantorSel>(av);
  const auto& bc = std::get<ClopenRegion::CantorSel>(bv);
  return ClopenRegion::cantor_sel(detail::prefixes_intersect(
      detail::normalize_prefixes(ac.prefixes), detail::normalize_prefixes(bc.prefixes)));
}

inline bool disjoint(const SpaceP& s, const ClopenRegion& a, const ClopenRegion& b) {
  return region_empty(s, intersect(s, a, b));
}

inline bool region_subset(const SpaceP& s, const ClopenRegion& a, const ClopenRegion& b) {
  return region_empty(s, intersect(s, a, complement(s, b)));
}

// --- invariants of the region subspace ---------------------------------------

inline HeightInfo region_height_info(const SpaceP& s, const ClopenRegion& r) {
  return std::visit(
      [&](const auto& rn) -> HeightInfo {
        using R = std::decay_t<decltype(rn)>;
        if constexpr (std::is_same_v<R, ClopenRegion::Whole>)
          return height_info(s);
        else if constexpr (std::is_same_v<R, ClopenRegion::NoneS>)
          return HeightInfo::repr(Ordinal());
        else if constexpr (std::is_same_v<R, ClopenRegion::LeafSelect>)
          return HeightInfo::repr(Ordinal::from_nat(rn.indices.empty() ? 0 : 1));
        else if constexpr (std::is_same_v<R, ClopenRegion::SumSelect>) {
          const auto& parts = std::get<Space::SumN>(s->node).parts;
          HeightInfo best = HeightInfo::repr(Ordinal());
          for (const auto& [i, sub] : rn.branches) {
            HeightInfo h = region_height_info(parts.at(i), sub);
            if (h.kind > best.kind ||
                (h.kind == best.kind && h.kind == HeightInfo::Representable &&
                 best.value < h.value))
              best = h;
          }
          return best;
        } else if constexpr (std::is_same_v<R, ClopenRegion::OnePointSelect>) {
          // with infinity, cofinitely many whole copies give the full height
          if (rn.include_infinity) return height_info(s);
          const auto& op = std::get<Space::OnePointN>(s->node);
          HeightInfo best = HeightInfo::repr(Ordinal());
          for (const auto& [c, sub] : rn.children) {
            HeightInfo h = region_height_info(member_space(op, c), sub);
            if (h.kind > best.kind ||
                (h.kind == best.kind && h.kind == HeightInfo::Representable &&
                 best.value < h.value))
              best = h;
          }
          return best;
        } else {
          return rn.prefixes.empty() ? HeightInfo::repr(Ordinal()) : HeightInfo::infinite();
        }
      },
      r.node().v);
}

// |R ∩ S^(beta)| — the derivative of the clopen subspace R.
inline Cardinal region_derived_card(const SpaceP& s, const ClopenRegion& r, const Ordinal& beta) {
  return std::visit(
      [&](const auto& rn) -> Cardinal {
        using R = std::decay_t<decltype(rn)>;
        if constexpr (std::is_same_v<R, ClopenRegion::Whole>)
          return derived_card(s, beta);
        else if constexpr (std::is_same_v<R, ClopenRegion::NoneS>)
          return Cardinal::finite(0);
        else if constexpr (std::is_same_v<R, ClopenRegion::LeafSelect>)
          return beta.is_zero() ? Cardinal::finite((long long)rn.indices.size())
                                : Cardinal::finite(0);
        else if constexpr (std::is_same_v<R, ClopenRegion::SumSelect>) {
          const auto& parts = std::get<Space::SumN>(s->node).parts;
          Cardinal c = Cardinal::finite(0);
          for (const auto& [i, sub] : rn.branches)
            c = card_sum(c, region_derived_card(parts.at(i), sub, beta));
          return c;
        } else if constexpr (std::is_same_v<R, ClopenRegion::OnePointSelect>) {
          const auto& op = std::get<Space::OnePointN>(s->node);
          Cardinal c = Cardinal::finite(0);
          for (const auto& [cp, sub] : rn.children)
            c = card_sum(c, region_derived_card(member_space(op, cp), sub, beta));
          if (rn.include_infinity) {
            // cofinitely many whole copies
            if (const auto* u = std::get_if<Space::Uniform>(&op.family)) {
              Cardinal dm = derived_card(u->member, beta);
              if (dm != Cardinal::finite(0)) c = card_sum(c, card_mul(Cardinal::aleph0(), dm));
              if (infinity_survives(u->member, beta)) c = card_sum(c, Cardinal::finite(1));
            } else {
              const auto& rp = std::get<Space::Ramp>(op.family);
              if (beta < rp.alpha) c = card_sum(c, Cardinal::aleph0());
              if (beta <= rp.alpha) c = card_sum(c, Cardinal::finite(1));
            }
          }
          return c;
        } else {
          return rn.prefixes.empty() ? Cardinal::finite(0) : Cardinal::continuum();
        }
      },
      r.node().v);
}

inline bool region_derived_nonempty(const SpaceP& s, const ClopenRegion& r, const Ordinal& beta) {
  return region_derived_card(s, r, beta) != Cardinal::finite(0);
}

// A canonical point inside a nonempty region.
inline Point first_point_in(const SpaceP& s, const ClopenRegion& r) {
  return std::visit(
      [&](const auto& rn) -> Point {
        using R = std::decay_t<decltype(rn)>;
        if constexpr (std::is_same_v<R, ClopenRegion::Whole>)
          return first_point(s);
        else if constexpr (std::is_same_v<R, ClopenRegion::NoneS>)
          throw InvalidRegion("no point in the empty region");
        else if constexpr (std::is_same_v<R, ClopenRegion::LeafSelect>) {
          if (rn.indices.empty()) throw InvalidRegion("no point in the empty region");
          return Point::of(Point::LeafIndex{*rn.indices.begin()});
        } else if constexpr (std::is_same_v<R, ClopenRegion::SumSelect>) {
          const auto& parts = std::get<Space::SumN>(s->node).parts;
          for (const auto& [i, sub] : rn.branches)
            if (!region_empty(parts.at(i), sub))
              return first_point_in(parts.at(i), sub).prepend(Point::SumBranch{i});
          throw InvalidRegion("no point in the empty region");
        } else if constexpr (std::is_same_v<R, ClopenRegion::OnePointSelect>) {
          const auto& op = std::get<Space::OnePointN>(s->node);
          for (const auto& [c, sub] : rn.children)
            if (!region_empty(member_space(op, c), sub))
              return first_point_in(member_space(op, c), sub).prepend(Point::CopyIndex{c});
          if (rn.include_infinity) return Point::of(Point::AtInfinity{});
          throw InvalidRegion("no point in the empty region");
        } else {
          if (rn.prefixes.empty()) throw InvalidRegion("no point in the empty region");
          auto ps = detail::normalize_prefixes(rn.prefixes);
          return Point::of(Point::CantorPrefix{ps[0], true});
        }
      },
      r.node().v);
}

// --- serialization -----------------------------------------------------------

inline nlohmann::json region_to_json(const ClopenRegion& r) {
  return std::visit(
      [&](const auto& rn) -> nlohmann::json {
        using R = std::decay_t<decltype(rn)>;
        if constexpr (std::is_same_v<R, ClopenRegion::Whole>)
          return "whole";
        else if constexpr (std::is_same_v<R, ClopenRegion::NoneS>)
          return "none";
        else if constexpr (std::is_same_v<R, ClopenRegion::LeafSelect>) {
          nlohmann::json idx = nlohmann::json::array();
          for (long long i : rn.indices) idx.push_back(i);
          return {{"leaf", idx}};
        } else if constexpr (std::is_same_v<R, ClopenRegion::SumSelect>) {
          nlohmann::json bs = nlohmann::json::object();
          for (const auto& [i, sub] : rn.branches) bs[std::to_string(i)] = region_to_json(sub);
          return {{"sum", bs}};
        } else if constexpr (std::is_same_v<R, ClopenRegion::OnePointSelect>) {
          nlohmann::json cs = nlohmann::json::object();
          for (const auto& [c, sub] : rn.children) cs[std::to_string(c)] = region_to_json(sub);
          return {{"op", {{"include_infinity", rn.include_infinity}, {"children", cs}}}};
        } else {
          return {{"cantor", rn.prefixes}};
        }
      },
      r.node().v);
}

inline ClopenRegion region_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    if (j == "whole") return ClopenRegion::whole();
    if (j == "none") return ClopenRegion::none();
    throw InvalidRegion("unknown region tag " + j.get<std::string>());
  }
  if (j.contains("leaf")) {
    std::set<long long> idx;
    for (const auto& i : j["leaf"]) idx.insert(i.get<long long>());
    return ClopenRegion::leaf_select(std::move(idx));
  }
  if (j.contains("sum")) {
    std::map<size_t, ClopenRegion> bs;
    for (const auto& [k, v] : j["sum"].items()) bs.emplace(std::stoul(k), region_from_json(v));
    return ClopenRegion::sum_select(std::move(bs));
  }
  if (j.contains("op")) {
    std::map<long long, ClopenRegion> cs;
    for (const auto& [k, v] : j["op"]["children"].items())
      cs.emplace(std::stoll(k), region_from_json(v));
    return ClopenRegion::onepoint_select(std::move(cs),
                                         j["op"]["include_infinity"].get<bool>());
  }
  if (j.contains("cantor"))
    return ClopenRegion::cantor_sel(j["cantor"].get<std::vector<std::string>>());
  throw InvalidRegion("unrecognized region JSON");
}

}  // namespace ck

#endif

#ifndef CKCALC_ORDINAL_HPP
#define CKCALC_ORDINAL_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ck {

struct SubtractUnderflow : std::runtime_error {
  SubtractUnderflow() : std::runtime_error("left_subtract: subtrahend exceeds minuend") {}
};
struct NotALimit : std::runtime_error {
  NotALimit() : std::runtime_error("fund_seq: ordinal is not a limit") {}
};
struct OrdinalSyntaxError : std::runtime_error {
  OrdinalSyntaxError(const std::string& msg, size_t pos)
      : std::runtime_error("ordinal syntax error at " + std::to_string(pos) + ": " + msg),
        position(pos) {}
  size_t position;
};

enum class Cmp { LT, EQ, GT };

// Ordinal below epsilon_0 in Cantor normal form:
//   w^(e_1)*c_1 + ... + w^(e_k)*c_k  with  e_1 > ... > e_k,  c_i >= 1.
// The empty term list is 0. Exponents are themselves normal forms.
class Ordinal {
public:
  struct Term;

  Ordinal() = default;

  static Ordinal zero() { return Ordinal(); }
  static Ordinal from_nat(long long n);
  // Normalizes an arbitrary term list by folding CNF addition left to right.
  static Ordinal make(const std::vector<std::pair<Ordinal, long long>>& terms);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  // Finite value if every exponent is zero (then there is at most one term).
  std::optional<long long> as_nat() const;

  friend bool operator==(const Ordinal& a, const Ordinal& b);
  friend bool operator!=(const Ordinal& a, const Ordinal& b) { return !(a == b); }
  friend bool operator<(const Ordinal& a, const Ordinal& b);
  friend bool operator<=(const Ordinal& a, const Ordinal& b) { return !(b < a); }
  friend bool operator>(const Ordinal& a, const Ordinal& b) { return b < a; }
  friend bool operator>=(const Ordinal& a, const Ordinal& b) { return !(a < b); }

private:
  std::vector<Term> terms_;
  friend Ordinal add(const Ordinal&, const Ordinal&);
  friend Ordinal mul_nat(const Ordinal&, long long);
  friend Ordinal omega_pow(const Ordinal&);
  friend Ordinal left_subtract(const Ordinal&, const Ordinal&);
  friend Cmp compare(const Ordinal&, const Ordinal&);
  friend class OrdinalOps;
};

struct Ordinal::Term {
  Ordinal exp;
  long long coeff;
};

inline Cmp compare(const Ordinal& a, const Ordinal& b);

inline bool operator==(const Ordinal& a, const Ordinal& b) {
  return compare(a, b) == Cmp::EQ;
}
inline bool operator<(const Ordinal& a, const Ordinal& b) {
  return compare(a, b) == Cmp::LT;
}

// Lexicographic comparison of (exponent, coefficient) term lists; a strict
// prefix is smaller.
inline Cmp compare(const Ordinal& a, const Ordinal& b) {
  size_t n = std::min(a.terms_.size(), b.terms_.size());
  for (size_t i = 0; i < n; ++i) {
    Cmp ec = compare(a.terms_[i].exp, b.terms_[i].exp);
    if (ec != Cmp::EQ) return ec;
    if (a.terms_[i].coeff != b.terms_[i].coeff)
      return a.terms_[i].coeff < b.terms_[i].coeff ? Cmp::LT : Cmp::GT;
  }
  if (a.terms_.size() == b.terms_.size()) return Cmp::EQ;
  return a.terms_.size() < b.terms_.size() ? Cmp::LT : Cmp::GT;
}

inline Ordinal Ordinal::from_nat(long long n) {
  if (n < 0) throw std::invalid_argument("negative natural");
  Ordinal o;
  if (n > 0) o.terms_.push_back({Ordinal(), n});
  return o;
}

inline std::optional<long long> Ordinal::as_nat() const {
  if (terms_.empty()) return 0;
  if (terms_.size() == 1 && terms_[0].exp.is_zero()) return terms_[0].coeff;
  return std::nullopt;
}

// CNF addition: terms of a below the leading exponent of b are absorbed.
inline Ordinal add(const Ordinal& a, const Ordinal& b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return b;
  const Ordinal& lead = b.terms_[0].exp;
  Ordinal r;
  size_t i = 0;
  while (i < a.terms_.size() && compare(a.terms_[i].exp, lead) == Cmp::GT) {
    r.terms_.push_back(a.terms_[i]);
    ++i;
  }
  if (i < a.terms_.size() && compare(a.terms_[i].exp, lead) == Cmp::EQ) {
    r.terms_.push_back({lead, a.terms_[i].coeff + b.terms_[0].coeff});
  } else {
    r.terms_.push_back(b.terms_[0]);
  }
  for (size_t j = 1; j < b.terms_.size(); ++j) r.terms_.push_back(b.terms_[j]);
  return r;
}

inline Ordinal Ordinal::make(const std::vector<std::pair<Ordinal, long long>>& terms) {
  Ordinal acc;
  for (const auto& [e, c] : terms) {
    if (c < 1) throw std::invalid_argument("CNF coefficient must be >= 1");
    Ordinal t;
    t.terms_.push_back({e, c});
    acc = add(acc, t);
  }
  return acc;
}

// a * n for n >= 1: multiplies the leading coefficient.
inline Ordinal mul_nat(const Ordinal& a, long long n) {
  if (n < 1) throw std::invalid_argument("mul_nat requires n >= 1");
  if (a.is_zero()) return a;
  Ordinal r = a;
  r.terms_[0].coeff *= n;
  return r;
}

inline Ordinal omega_pow(const Ordinal& e) {
  Ordinal r;
  r.terms_.push_back({e, 1});
  return r;
}

inline Ordinal succ(const Ordinal& a) { return add(a, Ordinal::from_nat(1)); }

// The unique g with b + g = a, for b <= a.
inline Ordinal left_subtract(const Ordinal& b, const Ordinal& a) {
  size_t i = 0;
  for (; i < b.terms_.size(); ++i) {
    if (i >= a.terms_.size()) throw SubtractUnderflow();
    Cmp ec = compare(a.terms_[i].exp, b.terms_[i].exp);
    if (ec == Cmp::LT) throw SubtractUnderflow();
    if (ec == Cmp::GT) {
      Ordinal r;
      r.terms_.assign(a.terms_.begin() + i, a.terms_.end());
      return r;
    }
    if (a.terms_[i].coeff != b.terms_[i].coeff) {
      if (a.terms_[i].coeff < b.terms_[i].coeff) throw SubtractUnderflow();
      Ordinal r;
      r.terms_.push_back({a.terms_[i].exp, a.terms_[i].coeff - b.terms_[i].coeff});
      r.terms_.insert(r.terms_.end(), a.terms_.begin() + i + 1, a.terms_.end());
      return r;
    }
  }
  Ordinal r;
  r.terms_.assign(a.terms_.begin() + i, a.terms_.end());
  return r;
}

struct OrdinalClass {
  enum Kind { Zero, Successor, Limit } kind;
  Ordinal pred;  // valid when kind == Successor
};

inline OrdinalClass classify(const Ordinal& a) {
  if (a.is_zero()) return {OrdinalClass::Zero, Ordinal()};
  const auto& last = a.terms().back();
  if (last.exp.is_zero()) {
    std::vector<std::pair<Ordinal, long long>> ts;
    for (size_t i = 0; i + 1 < a.terms().size(); ++i)
      ts.push_back({a.terms()[i].exp, a.terms()[i].coeff});
    if (last.coeff > 1) ts.push_back({Ordinal(), last.coeff - 1});
    return {OrdinalClass::Successor, Ordinal::make(ts)};
  }
  return {OrdinalClass::Limit, Ordinal()};
}

inline bool is_limit(const Ordinal& a) { return classify(a).kind == OrdinalClass::Limit; }

// Canonical fundamental sequence (Wainer-style). For a = c + w^e (last term
// split off, coefficient absorbed into c):
//   e = d+1:  beta_n = c + w^d * n
//   e limit:  beta_n = c + w^(fund_seq(e,n))
inline Ordinal fund_seq(const Ordinal& a, long long n) {
  if (!is_limit(a)) throw NotALimit();
  if (n < 1) throw std::invalid_argument("fund_seq requires n >= 1");
  const auto& last = a.terms().back();
  std::vector<std::pair<Ordinal, long long>> cs;
  for (size_t i = 0; i + 1 < a.terms().size(); ++i)
    cs.push_back({a.terms()[i].exp, a.terms()[i].coeff});
  if (last.coeff > 1) cs.push_back({last.exp, last.coeff - 1});
  Ordinal c = Ordinal::make(cs);
  OrdinalClass ec = classify(last.exp);
  if (ec.kind == OrdinalClass::Successor)
    return add(c, mul_nat(omega_pow(ec.pred), n));
  return add(c, omega_pow(fund_seq(last.exp, n)));
}

// --- Extended ordinals (adjoining infinity) ----------------------------------

class ExtendedOrdinal {
public:
  ExtendedOrdinal() : ord_(Ordinal()) {}
  ExtendedOrdinal(Ordinal o) : ord_(std::move(o)) {}
  static ExtendedOrdinal infinity() {
    ExtendedOrdinal e;
    e.ord_.reset();
    return e;
  }
  bool is_infinite() const { return !ord_.has_value(); }
  const Ordinal& finite() const {
    if (!ord_) throw std::logic_error("infinite extended ordinal has no finite value");
    return *ord_;
  }
  friend bool operator==(const ExtendedOrdinal& a, const ExtendedOrdinal& b) {
    if (a.is_infinite() || b.is_infinite()) return a.is_infinite() == b.is_infinite();
    return *a.ord_ == *b.ord_;
  }
  friend bool operator!=(const ExtendedOrdinal& a, const ExtendedOrdinal& b) { return !(a == b); }
  friend bool operator<(const ExtendedOrdinal& a, const ExtendedOrdinal& b) {
    if (a.is_infinite()) return false;
    if (b.is_infinite()) return true;
    return *a.ord_ < *b.ord_;
  }
  friend bool operator<=(const ExtendedOrdinal& a, const ExtendedOrdinal& b) { return !(b < a); }
  friend bool operator>(const ExtendedOrdinal& a, const ExtendedOrdinal& b) { return b < a; }
  friend bool operator>=(const ExtendedOrdinal& a, const ExtendedOrdinal& b) { return !(a < b); }

private:
  std::optional<Ordinal> ord_;
};

// Gamma numbers: 0, w^b, or infinity.
struct GammaNumber {
  ExtendedOrdinal value;
  friend bool operator==(const GammaNumber& a, const GammaNumber& b) { return a.value == b.value; }
  friend bool operator<=(const GammaNumber& a, const GammaNumber& b) { return a.value <= b.value; }
};

inline bool is_gamma(const ExtendedOrdinal& a) {
  if (a.is_infinite()) return true;
  const Ordinal& o = a.finite();
  if (o.is_zero()) return true;
  return o.terms().size() == 1 && o.terms()[0].coeff == 1;
}

// The least gamma number >= a.
inline GammaNumber gamma_of(const ExtendedOrdinal& a) {
  if (a.is_infinite()) return {ExtendedOrdinal::infinity()};
  const Ordinal& o = a.finite();
  if (o.is_zero()) return {ExtendedOrdinal(Ordinal())};
  if (o.terms().size() == 1 && o.terms()[0].coeff == 1) return {a};
  return {ExtendedOrdinal(omega_pow(succ(o.terms()[0].exp)))};
}

// --- Textual syntax ----------------------------------------------------------
//
//   ordinal := '0' | term ('+' term)*
//   term    := nat | 'w' ['^' '(' ordinal ')'] ['*' nat]
//
// Canonical printing omits '^(1)' on exponent one and '*1' coefficients.

inline std::string print(const Ordinal& a) {
  if (a.is_zero()) return "0";
  std::string s;
  bool first = true;
  for (const auto& t : a.terms()) {
    if (!first) s += "+";
    first = false;
    if (t.exp.is_zero()) {
      s += std::to_string(t.coeff);
      continue;
    }
    if (t.exp == Ordinal::from_nat(1))
      s += "w";
    else
      s += "w^(" + print(t.exp) + ")";
    if (t.coeff != 1) s += "*" + std::to_string(t.coeff);
  }
  return s;
}

inline std::string print(const ExtendedOrdinal& a) {
  return a.is_infinite() ? "infinity" : print(a.finite());
}

namespace detail {

struct OrdScanner {
  const std::string& s;
  size_t pos = 0;
  char peek() const { return pos < s.size() ? s[pos] : '\0'; }
  bool eat(char c) {
    if (peek() == c) { ++pos; return true; }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) throw OrdinalSyntaxError(std::string("expected '") + c + "'", pos);
  }
  long long nat() {
    if (!isdigit(peek())) throw OrdinalSyntaxError("expected digit", pos);
    long long v = 0;
    while (isdigit(peek())) v = v * 10 + (s[pos++] - '0');
    return v;
  }
};

inline Ordinal parse_ordinal_at(OrdScanner& sc) {
  std::vector<std::pair<Ordinal, long long>> terms;
  while (true) {
    if (sc.peek() == 'w') {
      ++sc.pos;
      Ordinal e = Ordinal::from_nat(1);
      if (sc.eat('^')) {
        sc.expect('(');
        e = parse_ordinal_at(sc);
        sc.expect(')');
      }
      long long c = 1;
      if (sc.eat('*')) c = sc.nat();
      if (c < 1) throw OrdinalSyntaxError("coefficient must be >= 1", sc.pos);
      terms.push_back({e, c});
    } else if (isdigit(sc.peek())) {
      long long v = sc.nat();
      if (v > 0) terms.push_back({Ordinal(), v});
    } else {
      throw OrdinalSyntaxError("expected term", sc.pos);
    }
    if (!sc.eat('+')) break;
  }
  return Ordinal::make(terms);
}

}  // namespace detail

inline Ordinal parse_ordinal(const std::string& text) {
  detail::OrdScanner sc{text};
  Ordinal o = detail::parse_ordinal_at(sc);
  if (sc.pos != text.size()) throw OrdinalSyntaxError("trailing input", sc.pos);
  return o;
}

inline ExtendedOrdinal parse_extended_ordinal(const std::string& text) {
  if (text == "infinity" || text == "inf") return ExtendedOrdinal::infinity();
  return ExtendedOrdinal(parse_ordinal(text));
}

}  // namespace ck

#endif

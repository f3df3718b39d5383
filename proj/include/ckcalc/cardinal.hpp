#ifndef CKCALC_CARDINAL_HPP
#define CKCALC_CARDINAL_HPP

#include <stdexcept>
#include <string>

namespace ck {

// Three-valued truth: comparisons on the cardinal scale may be independent of
// ZFC (Aleph1 vs Continuum strictness).
enum class Truth3 { Yes, No, Independent };

inline const char* to_string(Truth3 t) {
  switch (t) {
    case Truth3::Yes: return "yes";
    case Truth3::No: return "no";
    default: return "independent";
  }
}

// Symbolic cardinal on the fixed scale
//   finite < aleph0 < aleph1 <= c < 2^c.
class Cardinal {
public:
  enum Kind { Finite, Aleph0, Aleph1, Continuum, TwoToContinuum };

  Cardinal() : kind_(Finite), n_(0) {}
  static Cardinal finite(long long n) {
    if (n < 0) throw std::invalid_argument("negative cardinal");
    Cardinal c;
    c.kind_ = Finite;
    c.n_ = n;
    return c;
  }
  static Cardinal aleph0() { return of(Aleph0); }
  static Cardinal aleph1() { return of(Aleph1); }
  static Cardinal continuum() { return of(Continuum); }
  static Cardinal two_to_continuum() { return of(TwoToContinuum); }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Finite; }
  long long value() const {
    if (kind_ != Finite) throw std::logic_error("infinite cardinal has no finite value");
    return n_;
  }

  friend bool operator==(const Cardinal& a, const Cardinal& b) {
    return a.kind_ == b.kind_ && (a.kind_ != Finite || a.n_ == b.n_);
  }
  friend bool operator!=(const Cardinal& a, const Cardinal& b) { return !(a == b); }

  std::string str() const {
    switch (kind_) {
      case Finite: return std::to_string(n_);
      case Aleph0: return "aleph0";
      case Aleph1: return "aleph1";
      case Continuum: return "c";
      default: return "2^c";
    }
  }

  static Cardinal parse(const std::string& s) {
    if (s == "aleph0") return aleph0();
    if (s == "aleph1") return aleph1();
    if (s == "c") return continuum();
    if (s == "2^c") return two_to_continuum();
    return finite(std::stoll(s));
  }

private:
  static Cardinal of(Kind k) {
    Cardinal c;
    c.kind_ = k;
    c.n_ = 0;
    return c;
  }
  Kind kind_;
  long long n_;
};

// a <= b on the scale. Continuum <= Aleph1 is independent unless CH is
// assumed; Aleph1 <= Continuum holds outright.
inline Truth3 card_le(const Cardinal& a, const Cardinal& b, bool assume_ch = false) {
  using K = Cardinal::Kind;
  if (a.kind() == K::Finite && b.kind() == K::Finite)
    return a.value() <= b.value() ? Truth3::Yes : Truth3::No;
  if (a.kind() == K::Finite) return Truth3::Yes;
  if (b.kind() == K::Finite) return Truth3::No;
  if (a.kind() == b.kind()) return Truth3::Yes;
  if (a.kind() == K::Continuum && b.kind() == K::Aleph1)
    return assume_ch ? Truth3::Yes : Truth3::Independent;
  return a.kind() < b.kind() ? Truth3::Yes : Truth3::No;
}

// a < b iff not (b <= a).
inline Truth3 card_lt(const Cardinal& a, const Cardinal& b, bool assume_ch = false) {
  switch (card_le(b, a, assume_ch)) {
    case Truth3::Yes: return Truth3::No;
    case Truth3::No: return Truth3::Yes;
    default: return Truth3::Independent;
  }
}

inline Cardinal card_max(const Cardinal& a, const Cardinal& b) {
  // Aleph1 <= Continuum provably, so the kind order gives the max.
  if (a.kind() == Cardinal::Finite && b.kind() == Cardinal::Finite)
    return Cardinal::finite(std::max(a.value(), b.value()));
  return a.kind() >= b.kind() ? a : b;
}

inline Cardinal card_sum(const Cardinal& a, const Cardinal& b) {
  if (a.is_finite() && b.is_finite()) return Cardinal::finite(a.value() + b.value());
  return card_max(a, b);
}

inline Cardinal card_mul(const Cardinal& a, const Cardinal& b) {
  if (a.is_finite() && b.is_finite()) return Cardinal::finite(a.value() * b.value());
  if ((a.is_finite() && a.value() == 0) || (b.is_finite() && b.value() == 0))
    return Cardinal::finite(0);
  return card_max(a, b);
}

}  // namespace ck

#endif

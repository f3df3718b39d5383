#ifndef CKCALC_RATIONAL_HPP
#define CKCALC_RATIONAL_HPP

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ck {

// Exact rational scalar. All function values and norms in the calculus are
// rationals, so every isometry/PNPP check is an exact equality.
class Rational {
public:
  Rational() : num_(0), den_(1) {}
  Rational(long long n) : num_(n), den_(1) {}
  Rational(long long n, long long d) : num_(n), den_(d) { normalize(); }

  long long num() const { return num_; }
  long long den() const { return den_; }

  bool is_zero() const { return num_ == 0; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return make128((__int128)a.num_ * b.den_ + (__int128)b.num_ * a.den_,
                   (__int128)a.den_ * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return make128((__int128)a.num_ * b.den_ - (__int128)b.num_ * a.den_,
                   (__int128)a.den_ * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return make128((__int128)a.num_ * b.num_, (__int128)a.den_ * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    return make128((__int128)a.num_ * b.den_, (__int128)a.den_ * b.num_);
  }
  Rational operator-() const { return Rational(-num_, den_); }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return (__int128)a.num_ * b.den_ < (__int128)b.num_ * a.den_;
  }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  Rational abs() const { return num_ < 0 ? -*this : *this; }

  // "p/q" with q > 0 and gcd(p,q) = 1.
  std::string str() const {
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  static Rational parse(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(std::stoll(s));
    return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
  }

  static Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }
  static Rational min(const Rational& a, const Rational& b) { return a < b ? a : b; }

private:
  static Rational make128(__int128 n, __int128 d) {
    if (d == 0) throw std::domain_error("rational with zero denominator");
    if (d < 0) { n = -n; d = -d; }
    __int128 g = gcd128(n < 0 ? -n : n, d);
    if (g > 1) { n /= g; d /= g; }
    Rational r;
    r.num_ = (long long)n;
    r.den_ = (long long)d;
    return r;
  }
  static __int128 gcd128(__int128 a, __int128 b) {
    while (b != 0) { __int128 t = a % b; a = b; b = t; }
    return a == 0 ? 1 : a;
  }
  void normalize() {
    if (den_ == 0) throw std::domain_error("rational with zero denominator");
    if (den_ < 0) { num_ = -num_; den_ = -den_; }
    long long g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) { num_ /= g; den_ /= g; }
  }

  long long num_;
  long long den_;
};

inline Rational pos_part(const Rational& a) { return a > Rational(0) ? a : Rational(0); }
inline Rational neg_part(const Rational& a) { return a < Rational(0) ? -a : Rational(0); }

}  // namespace ck

#endif

#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace displab {

/// Exact rational arithmetic for exponent bookkeeping.
///
/// Every value is kept in lowest terms with a positive denominator.  A
/// distinguished value represents +infinity (used for the time exponent
/// q = inf); its reciprocal is exactly 0.  Arithmetic that would be
/// ill-defined on infinity (inf - inf, inf * 0, ...) throws instead of
/// producing a quiet wrong answer.
class Rational {
 public:
  constexpr Rational() : num_(0), den_(1) {}
  constexpr Rational(std::int64_t value) : num_(value), den_(1) {}
  Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
    if (den_ == 0) throw std::invalid_argument("Rational: zero denominator");
    normalize();
  }

  static constexpr Rational infinity() {
    Rational r;
    r.num_ = 1;
    r.den_ = 0;
    return r;
  }

  constexpr bool is_infinite() const { return den_ == 0; }
  constexpr bool is_zero() const { return num_ == 0 && den_ != 0; }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  /// 1/x, with 1/inf = 0 and 1/0 = inf.
  Rational reciprocal() const {
    if (is_infinite()) return Rational(0);
    if (num_ == 0) return infinity();
    Rational r;
    r.num_ = num_ > 0 ? den_ : -den_;
    r.den_ = num_ > 0 ? num_ : -num_;
    return r;
  }

  double to_double() const {
    if (is_infinite()) return std::numeric_limits<double>::infinity();
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  std::string str() const {
    if (is_infinite()) return "inf";
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    if (a.is_infinite() || b.is_infinite()) {
      if (a.is_infinite() && b.is_infinite()) return infinity();
      return infinity();
    }
    return make(i128(a.num_) * b.den_ + i128(b.num_) * a.den_,
                i128(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    if (a.is_infinite() && b.is_infinite())
      throw std::domain_error("Rational: inf - inf");
    if (a.is_infinite()) return infinity();
    if (b.is_infinite()) throw std::domain_error("Rational: finite - inf");
    return make(i128(a.num_) * b.den_ - i128(b.num_) * a.den_,
                i128(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    if (a.is_infinite() || b.is_infinite()) {
      if (a.is_zero() || b.is_zero())
        throw std::domain_error("Rational: inf * 0");
      if ((a.is_infinite() || a.num_ > 0) && (b.is_infinite() || b.num_ > 0))
        return infinity();
      throw std::domain_error("Rational: signed infinite product");
    }
    return make(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    return a * b.reciprocal();
  }
  Rational operator-() const {
    if (is_infinite()) throw std::domain_error("Rational: -inf unsupported");
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a,
                                          const Rational& b) {
    if (a.is_infinite() && b.is_infinite()) return std::strong_ordering::equal;
    if (a.is_infinite()) return std::strong_ordering::greater;
    if (b.is_infinite()) return std::strong_ordering::less;
    const i128 lhs = i128(a.num_) * b.den_;
    const i128 rhs = i128(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.str();
  }

 private:
  using i128 = __int128;

  static Rational make(i128 num, i128 den) {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const i128 g = gcd128(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    if (num > INT64_MAX || num < INT64_MIN || den > INT64_MAX)
      throw std::overflow_error("Rational: overflow after reduction");
    Rational r;
    r.num_ = static_cast<std::int64_t>(num);
    r.den_ = static_cast<std::int64_t>(den);
    return r;
  }

  static i128 gcd128(i128 a, i128 b) {
    while (b != 0) {
      const i128 t = a % b;
      a = b;
      b = t;
    }
    return a == 0 ? 1 : a;
  }

  void normalize() {
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    const std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  std::int64_t num_;
  std::int64_t den_;  // 0 encodes +infinity
};

inline Rational min(const Rational& a, const Rational& b) {
  return a < b ? a : b;
}
inline Rational max(const Rational& a, const Rational& b) {
  return a > b ? a : b;
}

}  // namespace displab

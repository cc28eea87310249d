#pragma once

// Exact scalar types used throughout the library.
//
// Integer is a 64-bit signed integer whose arithmetic throws
// bott::ArithmeticOverflow instead of wrapping. Rational is a normalized
// fraction of two such integers. Both plug into Eigen through NumTraits so that
// lattice vectors and matrices are ordinary Eigen dense types.

#include <Eigen/Core>

#include <compare>
#include <cstdint>
#include <functional>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace bott {

struct ArithmeticOverflow : std::overflow_error {
  using std::overflow_error::overflow_error;
};

class Integer {
 public:
  constexpr Integer() = default;
  constexpr Integer(std::int64_t v) : v_(v) {}  // NOLINT(google-explicit-constructor)

  [[nodiscard]] constexpr std::int64_t value() const { return v_; }

  friend Integer operator+(Integer a, Integer b) {
    std::int64_t r;
    if (__builtin_add_overflow(a.v_, b.v_, &r)) throw ArithmeticOverflow("integer addition overflow");
    return r;
  }
  friend Integer operator-(Integer a, Integer b) {
    std::int64_t r;
    if (__builtin_sub_overflow(a.v_, b.v_, &r)) throw ArithmeticOverflow("integer subtraction overflow");
    return r;
  }
  friend Integer operator*(Integer a, Integer b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a.v_, b.v_, &r)) throw ArithmeticOverflow("integer multiplication overflow");
    return r;
  }
  // Truncating division; callers only divide exactly.
  friend Integer operator/(Integer a, Integer b) {
    if (b.v_ == 0) throw std::domain_error("integer division by zero");
    if (a.v_ == INT64_MIN && b.v_ == -1) throw ArithmeticOverflow("integer division overflow");
    return a.v_ / b.v_;
  }
  friend Integer operator%(Integer a, Integer b) {
    if (b.v_ == 0) throw std::domain_error("integer division by zero");
    if (b.v_ == -1) return 0;
    return a.v_ % b.v_;
  }
  Integer operator-() const {
    if (v_ == INT64_MIN) throw ArithmeticOverflow("integer negation overflow");
    return -v_;
  }
  Integer& operator+=(Integer o) { return *this = *this + o; }
  Integer& operator-=(Integer o) { return *this = *this - o; }
  Integer& operator*=(Integer o) { return *this = *this * o; }
  Integer& operator/=(Integer o) { return *this = *this / o; }

  friend constexpr bool operator==(Integer a, Integer b) = default;
  friend constexpr auto operator<=>(Integer a, Integer b) = default;

  friend std::ostream& operator<<(std::ostream& os, Integer a) { return os << a.v_; }

 private:
  std::int64_t v_ = 0;
};

inline Integer abs(Integer a) { return a < 0 ? -a : a; }

// Floor division and non-negative remainder.
inline Integer floor_div(Integer a, Integer b) {
  Integer q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
  return q;
}

inline Integer gcd(Integer a, Integer b) {
  a = abs(a);
  b = abs(b);
  while (b != 0) {
    Integer t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// Extended gcd: returns (g, x, y) with a*x + b*y = g >= 0.
struct Bezout {
  Integer g, x, y;
};
inline Bezout extended_gcd(Integer a, Integer b) {
  Integer old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    Integer q = old_r / r;
    Integer tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t v) : num_(v), den_(1) {}  // NOLINT(google-explicit-constructor)
  constexpr Rational(Integer v) : num_(v), den_(1) {}       // NOLINT(google-explicit-constructor)
  Rational(Integer num, Integer den) : num_(num), den_(den) {
    if (den_ == 0) throw std::domain_error("rational with zero denominator");
    normalize();
  }

  [[nodiscard]] Integer num() const { return num_; }
  [[nodiscard]] Integer den() const { return den_; }
  [[nodiscard]] bool is_integer() const { return den_ == 1; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    if (a.den_ == b.den_) return {a.num_ + b.num_, a.den_};
    Integer g = gcd(a.den_, b.den_);
    Integer bd = b.den_ / g;
    return {a.num_ * bd + b.num_ * (a.den_ / g), a.den_ * bd};
  }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
  friend Rational operator*(const Rational& a, const Rational& b) {
    Integer g1 = gcd(a.num_, b.den_);
    Integer g2 = gcd(b.num_, a.den_);
    if (g1 == 0) g1 = 1;
    if (g2 == 0) g2 = 1;
    return {(a.num_ / g1) * (b.num_ / g2), (a.den_ / g2) * (b.den_ / g1)};
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    return a * Rational(b.den_, b.num_);
  }
  Rational operator-() const {
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    return a.num_ * b.den_ <=> b.num_ * a.den_;
  }

  // "p" or "p/q" in lowest terms.
  [[nodiscard]] std::string str() const {
    return den_ == 1 ? std::to_string(num_.value())
                     : std::to_string(num_.value()) + "/" + std::to_string(den_.value());
  }
  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  void normalize() {
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    Integer g = gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  Integer num_ = 0;
  Integer den_ = 1;
};

inline Rational abs(const Rational& r) { return r < Rational(0) ? -r : r; }

// Parses "p" or "p/q".
Rational parse_rational(const std::string& text);

}  // namespace bott

template <>
struct std::hash<bott::Integer> {
  std::size_t operator()(bott::Integer a) const noexcept { return std::hash<std::int64_t>{}(a.value()); }
};

namespace Eigen {

template <>
struct NumTraits<bott::Integer> : GenericNumTraits<std::int64_t> {
  using Real = bott::Integer;
  using NonInteger = bott::Rational;
  using Literal = bott::Integer;
  using Nested = bott::Integer;
  enum {
    IsComplex = 0,
    IsInteger = 1,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 2,
    MulCost = 3
  };
  static bott::Integer epsilon() { return 0; }
  static bott::Integer dummy_precision() { return 0; }
  static bott::Integer highest() { return INT64_MAX; }
  static bott::Integer lowest() { return INT64_MIN; }
  static int digits10() { return 18; }
};

template <>
struct NumTraits<bott::Rational> : GenericNumTraits<std::int64_t> {
  using Real = bott::Rational;
  using NonInteger = bott::Rational;
  using Literal = bott::Rational;
  using Nested = bott::Rational;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 2,
    AddCost = 8,
    MulCost = 8
  };
  static bott::Rational epsilon() { return 0; }
  static bott::Rational dummy_precision() { return 0; }
  static bott::Rational highest() { return INT64_MAX; }
  static bott::Rational lowest() { return INT64_MIN; }
  static int digits10() { return 18; }
};

}  // namespace Eigen

namespace bott {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using IntVector = Vector<Integer>;
using IntMatrix = Matrix<Integer>;
using QVector = Vector<Rational>;
using QMatrix = Matrix<Rational>;

// Lexicographic order on vectors; shorter vectors compare first.
template <typename Scalar>
bool lex_less(const Vector<Scalar>& a, const Vector<Scalar>& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

template <typename Scalar>
Vector<Rational> to_rational(const Vector<Scalar>& v) {
  return v.unaryExpr([](const Scalar& x) { return Rational(x); });
}
template <typename Scalar>
Matrix<Rational> to_rational(const Matrix<Scalar>& m) {
  return m.unaryExpr([](const Scalar& x) { return Rational(x); });
}

IntVector make_vector(std::initializer_list<std::int64_t> values);

}  // namespace bott

#pragma once

#include <gmpxx.h>

#include <Eigen/Core>

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace chaoslab {

using Integer = mpz_class;

/// Arbitrary-precision rational with value semantics.
/// Always stored in canonical form (coprime numerator/denominator, positive denominator).
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(int n) : v_(n) {}                // NOLINT: implicit by design
  Rational(long n) : v_(static_cast<signed long>(n)) {}  // NOLINT
  Rational(const Integer& n) : v_(n) {}     // NOLINT
  Rational(long num, long den) : v_(num, den) {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    v_.canonicalize();
  }
  Rational(const Integer& num, const Integer& den) : v_(num, den) {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    v_.canonicalize();
  }
  explicit Rational(const mpq_class& q) : v_(q) {}

  /// Parses "p", "-p", or "p/q" in base 10. Throws std::invalid_argument on malformed input.
  static Rational from_string(std::string_view text);

  const mpq_class& raw() const { return v_; }
  Integer numerator() const { return v_.get_num(); }
  Integer denominator() const { return v_.get_den(); }

  bool is_zero() const { return mpq_sgn(v_.get_mpq_t()) == 0; }
  bool is_integer() const { return v_.get_den() == 1; }
  int sign() const { return mpq_sgn(v_.get_mpq_t()); }

  double to_double() const { return v_.get_d(); }
  std::string to_string() const { return v_.get_str(); }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw std::invalid_argument("Rational: division by zero");
    v_ /= o.v_;
    return *this;
  }

  Rational operator-() const { Rational r; r.v_ = -v_; return r; }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.v_; }

 private:
  mpq_class v_;
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

inline Rational pow(const Rational& base, unsigned long e) {
  Integer num, den;
  mpz_pow_ui(num.get_mpz_t(), base.numerator().get_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), base.denominator().get_mpz_t(), e);
  return Rational(num, den);
}

inline Integer factorial(unsigned long n) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

/// (2m-1)!! = 1*3*5*...*(2m-1); the m = 0 case is 1.
inline Integer double_factorial_odd(unsigned long m) {
  Integer r = 1;
  if (m == 0) return r;
  for (unsigned long i = 3; i + 1 <= 2 * m; i += 2) r *= i;
  return r;
}

inline Integer binomial(unsigned long n, unsigned long k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

inline Rational Rational::from_string(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("Rational: empty string");
  if (text.front() == '+') text.remove_prefix(1);
  std::string s(text);
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("Rational: malformed '" + s + "'");
  if (q.get_den() == 0) throw std::invalid_argument("Rational: zero denominator in '" + s + "'");
  q.canonicalize();
  return Rational(q);
}

using RationalVector = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;
using RationalMatrix = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;

}  // namespace chaoslab

namespace Eigen {

template <>
struct NumTraits<chaoslab::Rational> : GenericNumTraits<chaoslab::Rational> {
  using Real = chaoslab::Rational;
  using NonInteger = chaoslab::Rational;
  using Nested = chaoslab::Rational;
  using Literal = long;

  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }

  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 100,
    MulCost = 100,
  };
};

}  // namespace Eigen

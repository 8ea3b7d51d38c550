#pragma once

#include <string>
#include <vector>

#include "chaoslab/rational.hpp"

namespace chaoslab {

/// Univariate polynomial with rational coefficients, dense storage, no trailing zeros.
/// The zero polynomial has degree -1.
class RationalPoly {
 public:
  RationalPoly() = default;
  explicit RationalPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { normalize(); }

  static RationalPoly constant(const Rational& a) { return RationalPoly({a}); }
  /// The monomial a*X^n.
  static RationalPoly monomial(const Rational& a, int n);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }

  /// Coefficient of X^i; zero beyond the degree.
  const Rational& coefficient(int i) const;

  Rational evaluate(const Rational& x) const;

  /// Composition with X + a.
  RationalPoly shift(const Rational& a) const;

  /// Exact division by X^2. Throws std::logic_error if the constant or linear term is nonzero.
  RationalPoly divide_by_x2() const;

  RationalPoly& operator+=(const RationalPoly& o);
  RationalPoly& operator-=(const RationalPoly& o);
  friend RationalPoly operator+(RationalPoly a, const RationalPoly& b) { return a += b; }
  friend RationalPoly operator-(RationalPoly a, const RationalPoly& b) { return a -= b; }
  friend RationalPoly operator*(const RationalPoly& a, const RationalPoly& b);
  friend RationalPoly operator*(const Rational& s, const RationalPoly& p);
  RationalPoly operator-() const;

  friend bool operator==(const RationalPoly& a, const RationalPoly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const RationalPoly& a, const RationalPoly& b) { return !(a == b); }

  /// Human-readable form such as "X^2 - 6X + 11".
  std::string to_string() const;

 private:
  void normalize() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }

  std::vector<Rational> c_;
};

}  // namespace chaoslab

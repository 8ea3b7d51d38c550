#include "chaoslab/rational_poly.hpp"

#include <stdexcept>

namespace chaoslab {

RationalPoly RationalPoly::monomial(const Rational& a, int n) {
  if (n < 0) throw std::invalid_argument("RationalPoly: negative exponent");
  std::vector<Rational> c(static_cast<std::size_t>(n) + 1, Rational(0));
  c.back() = a;
  return RationalPoly(std::move(c));
}

const Rational& RationalPoly::coefficient(int i) const {
  static const Rational kZero(0);
  if (i < 0 || i >= static_cast<int>(c_.size())) return kZero;
  return c_[static_cast<std::size_t>(i)];
}

Rational RationalPoly::evaluate(const Rational& x) const {
  Rational acc(0);
  for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
  return acc;
}

RationalPoly RationalPoly::shift(const Rational& a) const {
  // Horner in (X + a): builds p(X + a) one coefficient at a time.
  RationalPoly result;
  const RationalPoly xpa({a, Rational(1)});
  for (std::size_t i = c_.size(); i-- > 0;) {
    result = result * xpa;
    result += RationalPoly::constant(c_[i]);
  }
  return result;
}

RationalPoly RationalPoly::divide_by_x2() const {
  if (!coefficient(0).is_zero() || !coefficient(1).is_zero())
    throw std::logic_error("RationalPoly: inexact division by X^2");
  if (degree() < 2) return RationalPoly();
  std::vector<Rational> c(c_.begin() + 2, c_.end());
  return RationalPoly(std::move(c));
}

RationalPoly& RationalPoly::operator+=(const RationalPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  normalize();
  return *this;
}

RationalPoly& RationalPoly::operator-=(const RationalPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  normalize();
  return *this;
}

RationalPoly operator*(const RationalPoly& a, const RationalPoly& b) {
  if (a.is_zero() || b.is_zero()) return RationalPoly();
  std::vector<Rational> c(a.c_.size() + b.c_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  return RationalPoly(std::move(c));
}

RationalPoly operator*(const Rational& s, const RationalPoly& p) {
  std::vector<Rational> c(p.c_);
  for (auto& x : c) x *= s;
  return RationalPoly(std::move(c));
}

RationalPoly RationalPoly::operator-() const { return Rational(-1) * (*this); }

std::string RationalPoly::to_string() const {
  if (is_zero()) return "0";
  std::string out;
  for (std::size_t i = c_.size(); i-- > 0;) {
    const Rational& a = c_[i];
    if (a.is_zero()) continue;
    const bool first = out.empty();
    const Rational mag = abs(a);
    if (!first) out += a.sign() < 0 ? " - " : " + ";
    else if (a.sign() < 0) out += "-";
    const bool unit = (mag == Rational(1)) && i > 0;
    if (!unit) out += mag.to_string();
    if (i > 0) {
      out += "X";
      if (i > 1) out += "^" + std::to_string(i);
    }
  }
  return out;
}

}  // namespace chaoslab

#pragma once

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

#include "chaoslab/rational.hpp"

namespace chaoslab {

/// Exact scalar of the form a + b*sqrt(m) with a, b rational and m a nonnegative integer.
/// Square factors of m are folded into b on construction, so a pure rational always has
/// b = 0, m = 0. Sums and products require matching radicands; mixing two distinct
/// irrational radicands throws.
class ExactScalar {
 public:
  ExactScalar() = default;
  ExactScalar(const Rational& a) : a_(a) {}  // NOLINT: implicit by design
  ExactScalar(int a) : a_(a) {}              // NOLINT
  ExactScalar(const Rational& a, const Rational& b, const Integer& m) : a_(a), b_(b), m_(m) {
    if (m_ < 0) throw std::invalid_argument("ExactScalar: negative radicand");
    reduce();
  }

  /// Exact square root of a nonnegative rational: sqrt(p/q) = sqrt(p*q)/q.
  static ExactScalar sqrt_of(const Rational& s) {
    if (s.sign() < 0) throw std::invalid_argument("ExactScalar: sqrt of negative rational");
    Integer radicand = s.numerator() * s.denominator();
    return ExactScalar(Rational(0), Rational(Integer(1), s.denominator()), radicand);
  }

  const Rational& rational_part() const { return a_; }
  const Rational& root_coefficient() const { return b_; }
  const Integer& radicand() const { return m_; }
  bool is_rational() const { return b_.is_zero(); }

  /// Requires is_rational().
  const Rational& as_rational() const {
    if (!is_rational()) throw std::logic_error("ExactScalar: irrational value");
    return a_;
  }

  bool is_zero() const { return a_.is_zero() && b_.is_zero(); }

  /// Exact sign via comparison of a^2 against b^2 m when the two terms disagree.
  int sign() const {
    const int sa = a_.sign();
    const int sb = b_.sign();
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    const Rational a2 = a_ * a_;
    const Rational b2m = b_ * b_ * Rational(m_);
    if (a2 == b2m) return 0;
    return a2 > b2m ? sa : sb;
  }

  double to_double() const { return a_.to_double() + b_.to_double() * std::sqrt(m_.get_d()); }

  /// "p/q", "r/s*sqrt(m)", or "p/q+r/s*sqrt(m)" (integer denominators omitted as in Rational).
  std::string to_string() const {
    if (b_.is_zero()) return a_.to_string();
    std::string root = b_.to_string() + "*sqrt(" + m_.get_str() + ")";
    if (a_.is_zero()) return root;
    return a_.to_string() + (b_.sign() > 0 ? "+" : "") + root;
  }

  ExactScalar operator-() const {
    ExactScalar r(*this);
    r.a_ = -r.a_;
    r.b_ = -r.b_;
    return r;
  }

  ExactScalar& operator+=(const ExactScalar& o) {
    a_ += o.a_;
    if (!o.b_.is_zero()) {
      if (b_.is_zero()) {
        b_ = o.b_;
        m_ = o.m_;
      } else if (m_ == o.m_) {
        b_ += o.b_;
        if (b_.is_zero()) m_ = 0;
      } else {
        throw std::logic_error("ExactScalar: mixing distinct radicands");
      }
    }
    return *this;
  }
  ExactScalar& operator-=(const ExactScalar& o) { return *this += -o; }

  ExactScalar& operator*=(const ExactScalar& o) {
    if (o.is_rational()) {
      a_ *= o.a_;
      b_ *= o.a_;
      if (b_.is_zero()) m_ = 0;
      return *this;
    }
    if (is_rational()) {
      const Rational scale = a_;
      a_ = scale * o.a_;
      b_ = scale * o.b_;
      m_ = b_.is_zero() ? Integer(0) : o.m_;
      return *this;
    }
    if (m_ != o.m_) throw std::logic_error("ExactScalar: mixing distinct radicands");
    const Rational a = a_ * o.a_ + b_ * o.b_ * Rational(m_);
    const Rational b = a_ * o.b_ + b_ * o.a_;
    a_ = a;
    b_ = b;
    if (b_.is_zero()) m_ = 0;
    return *this;
  }

  friend ExactScalar operator+(ExactScalar x, const ExactScalar& y) { return x += y; }
  friend ExactScalar operator-(ExactScalar x, const ExactScalar& y) { return x -= y; }
  friend ExactScalar operator*(ExactScalar x, const ExactScalar& y) { return x *= y; }

  friend bool operator==(const ExactScalar& x, const ExactScalar& y) { return (x - y).is_zero(); }
  friend bool operator!=(const ExactScalar& x, const ExactScalar& y) { return !(x == y); }

  friend std::ostream& operator<<(std::ostream& os, const ExactScalar& s) {
    return os << s.to_string();
  }

 private:
  /// Folds square factors of the radicand into the coefficient: b*sqrt(s^2 t) = bs*sqrt(t).
  void reduce() {
    if (b_.is_zero() || m_ == 0) {
      b_ = 0;
      m_ = 0;
      return;
    }
    Integer s = 1;
    for (Integer d = 2; d * d <= m_ && d <= 4096; ++d) {
      const Integer d2 = d * d;
      while (mpz_divisible_p(m_.get_mpz_t(), d2.get_mpz_t())) {
        m_ /= d2;
        s *= d;
      }
    }
    if (mpz_perfect_square_p(m_.get_mpz_t())) {
      Integer r;
      mpz_sqrt(r.get_mpz_t(), m_.get_mpz_t());
      s *= r;
      m_ = 1;
    }
    if (s != 1) b_ *= Rational(s);
    if (m_ == 1) {
      a_ += b_;
      b_ = 0;
      m_ = 0;
    }
  }

  Rational a_;
  Rational b_;
  Integer m_ = 0;
};

}  // namespace chaoslab

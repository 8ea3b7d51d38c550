#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "chaoslab/rational.hpp"

namespace chaoslab {

/// Function on the truncated lattice {0, ..., M} under the normalized weights
/// theta^j / j!. The generator is the birth-death form
///   Lf(j) = theta (f(j+1) - f(j)) - j (f(j) - f(j-1)),   f(-1) = f(M+1) = 0,
/// which is killed above M and exactly symmetric for the truncated weights.
/// valid_upto marks the largest index at which the stored values still agree with the
/// untruncated function the object stands for; applying the generator marks the two
/// topmost lattice indices contaminated and moves existing contamination down by one.
class PoissonFunction {
 public:
  PoissonFunction(Rational theta, int truncation, RationalVector values, int valid_upto);

  const Rational& theta() const { return theta_; }
  int truncation() const { return trunc_; }
  int valid_upto() const { return valid_; }
  bool boundary_clean() const { return valid_ >= trunc_; }
  const RationalVector& values() const { return values_; }
  const Rational& operator[](int j) const { return values_[j]; }
  Rational& operator[](int j) { return values_[j]; }

  static constexpr std::string_view model_name() { return "poisson"; }

 private:
  Rational theta_;
  int trunc_;
  RationalVector values_;
  int valid_;
};

struct PoissonIntegral {
  Rational value;          // integral against the truncated normalized weights
  Rational tail_bound;     // bound on the relative weight mass above the truncation
  bool boundary_clean = false;  // false when the integrand was boundary-contaminated
};

/// Factory for truncated Poisson-space functions.
class PoissonModel {
 public:
  /// Picks the smallest truncation whose relative tail mass is below 10^-30.
  explicit PoissonModel(const Rational& theta);
  PoissonModel(const Rational& theta, int truncation);

  const Rational& theta() const { return theta_; }
  int truncation() const { return trunc_; }

  PoissonFunction constant(const Rational& c) const;
  PoissonFunction delta(int j) const;
  PoissonFunction from_values(RationalVector values) const;
  /// Monic Charlier polynomial of degree k evaluated on the lattice; eigenfunction of -L
  /// with eigenvalue k away from the truncation boundary.
  PoissonFunction charlier(int k) const;

  Rational eigenvalue(int n) const { return Rational(n); }

  /// Bound on (sum_{j > M} theta^j / j!) / (sum_{j <= M} theta^j / j!).
  static Rational relative_tail_bound(const Rational& theta, int truncation);

 private:
  Rational theta_;
  int trunc_;
};

PoissonFunction apply_generator(const PoissonFunction& f);

PoissonFunction operator+(const PoissonFunction& a, const PoissonFunction& b);
PoissonFunction operator-(const PoissonFunction& a, const PoissonFunction& b);
PoissonFunction operator*(const PoissonFunction& a, const PoissonFunction& b);
PoissonFunction operator*(const Rational& s, const PoissonFunction& f);

/// Integral detail including the truncation tail bound and the boundary flag.
PoissonIntegral poisson_integral(const PoissonFunction& f);
/// Plain value of the truncated integral.
Rational integrate(const PoissonFunction& f);
inline bool integral_is_exact(const PoissonFunction& f) { return f.boundary_clean(); }

/// Zero on the valid range [0, valid_upto]; throws if the range is empty.
bool is_zero(const PoissonFunction& f);
bool same_space(const PoissonFunction& a, const PoissonFunction& b);
std::optional<Rational> constant_value(const PoissonFunction& f);

/// One line per lattice point: decimal index, tab, exact value; sorted by index.
std::string dump_function(const PoissonFunction& f);

}  // namespace chaoslab

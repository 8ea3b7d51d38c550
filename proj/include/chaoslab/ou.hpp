#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chaoslab/rational.hpp"
#include "chaoslab/rational_poly.hpp"

namespace chaoslab {

using Exponents = std::vector<unsigned>;

/// Polynomial on R^N integrated against the standard Gaussian, stored as a sparse map
/// from monomial multi-exponents (length N) to rational coefficients.
class PolyFunction {
 public:
  explicit PolyFunction(int dimension);

  int dimension() const { return dim_; }
  const std::map<Exponents, Rational>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  int total_degree() const;

  /// Merges a term into the map; exponents must have length N. Zero coefficients drop out.
  void add_term(const Exponents& exponents, const Rational& coeff);

  Rational evaluate(const std::vector<Rational>& point) const;

  PolyFunction partial_derivative(int i) const;  // coordinate i, 1-based

  static constexpr std::string_view model_name() { return "ou"; }

 private:
  int dim_;
  std::map<Exponents, Rational> terms_;
};

/// Factory for Gaussian-space polynomials; the generator is Lf = Laplacian(f) - x . grad(f).
class OuModel {
 public:
  explicit OuModel(int dimension);

  int dimension() const { return dim_; }

  PolyFunction constant(const Rational& c) const;
  /// Coordinate function x_i, 1-based.
  PolyFunction coordinate(int i) const;
  PolyFunction monomial(const Exponents& exponents, const Rational& coeff) const;
  /// Product of monic Hermite polynomials, one per coordinate; eigenfunction of -L
  /// with eigenvalue |multi_index|. Squared norm is the product of factorials.
  PolyFunction hermite(const Exponents& multi_index) const;

  Rational eigenvalue(int n) const { return Rational(n); }

 private:
  int dim_;
};

/// Monic Hermite polynomial of one variable: He_0 = 1, He_1 = X,
/// He_{k+1} = X He_k - k He_{k-1}.
RationalPoly hermite_monic(int k);

PolyFunction apply_generator(const PolyFunction& f);

PolyFunction operator+(const PolyFunction& a, const PolyFunction& b);
PolyFunction operator-(const PolyFunction& a, const PolyFunction& b);
PolyFunction operator*(const PolyFunction& a, const PolyFunction& b);
PolyFunction operator*(const Rational& s, const PolyFunction& f);

/// Exact Gaussian moment: each coordinate contributes (a_i - 1)!! for even a_i, 0 for odd.
Rational integrate(const PolyFunction& f);
constexpr bool integral_is_exact(const PolyFunction&) { return true; }

bool is_zero(const PolyFunction& f);
bool same_space(const PolyFunction& a, const PolyFunction& b);
std::optional<Rational> constant_value(const PolyFunction& f);

/// grad(f) . grad(g); for this model it equals the carre du champ of a diffusion.
PolyFunction gradient_dot(const PolyFunction& f, const PolyFunction& g);

/// Sum over ordered index tuples (i_1, ..., i_m) of (d^m f / dx_{i_1}...dx_{i_m})^2.
PolyFunction iterated_gradient_square(const PolyFunction& f, int m);

/// One line per monomial: comma-separated exponents, tab, exact value; sorted.
std::string dump_function(const PolyFunction& f);

}  // namespace chaoslab

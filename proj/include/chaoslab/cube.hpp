#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "chaoslab/rational.hpp"

namespace chaoslab {

/// Function on the discrete cube {-1,+1}^N under the uniform measure, stored as the
/// value vector over all 2^N points. Point index bit (i-1) set <=> coordinate x_i = -1.
class CubeFunction {
 public:
  CubeFunction(int dimension, RationalVector values);

  int dimension() const { return dim_; }
  Eigen::Index point_count() const { return values_.size(); }
  const RationalVector& values() const { return values_; }
  RationalVector& values() { return values_; }
  const Rational& operator[](Eigen::Index p) const { return values_[p]; }
  Rational& operator[](Eigen::Index p) { return values_[p]; }

  static constexpr std::string_view model_name() { return "cube"; }

 private:
  int dim_;
  RationalVector values_;
};

/// Factory for cube functions; the generator is Lf = (1/2) sum_i (f(tau_i x) - f(x)).
class CubeModel {
 public:
  static constexpr int kMaxDimension = 20;  // dense value vectors up to 2^20 points

  explicit CubeModel(int dimension);

  int dimension() const { return dim_; }
  Eigen::Index point_count() const { return Eigen::Index(1) << dim_; }

  CubeFunction constant(const Rational& c) const;
  /// Coordinate function x_i, 1-based.
  CubeFunction coordinate(int i) const;
  /// Walsh character W_A for a coordinate subset given as a bitmask (bit i-1 <=> i in A).
  CubeFunction walsh(std::uint32_t subset) const;
  CubeFunction from_values(RationalVector values) const;

  /// Eigenvalue of -L on Walsh characters of level |A| = n.
  Rational eigenvalue(int n) const { return Rational(n); }

 private:
  int dim_;
};

CubeFunction apply_generator(const CubeFunction& f);

/// Difference operator D_i f(x) = f(tau_i x) - f(x), coordinate i 1-based.
CubeFunction coordinate_difference(const CubeFunction& f, int i);

CubeFunction operator+(const CubeFunction& a, const CubeFunction& b);
CubeFunction operator-(const CubeFunction& a, const CubeFunction& b);
CubeFunction operator*(const CubeFunction& a, const CubeFunction& b);
CubeFunction operator*(const Rational& s, const CubeFunction& f);

Rational integrate(const CubeFunction& f);
constexpr bool integral_is_exact(const CubeFunction&) { return true; }

bool is_zero(const CubeFunction& f);
bool same_space(const CubeFunction& a, const CubeFunction& b);
std::optional<Rational> constant_value(const CubeFunction& f);

/// Exact Walsh coefficients: f = sum_A coeff[A] * W_A.
std::map<std::uint32_t, Rational> walsh_coefficients(const CubeFunction& f);
CubeFunction from_walsh_coefficients(const CubeModel& model,
                                     const std::map<std::uint32_t, Rational>& coeffs);

/// One line per point: lowercase hex index, tab, exact value; sorted by index.
std::string dump_function(const CubeFunction& f);

}  // namespace chaoslab

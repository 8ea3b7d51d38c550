#pragma once

#include <utility>
#include <vector>

#include "chaoslab/rational.hpp"
#include "chaoslab/rational_poly.hpp"
#include "chaoslab/spectrum.hpp"

namespace chaoslab {

/// Q_k(X) = prod_{i=0}^{k-1} (X - lambda_i); Q_0 = 1. Requires eigenvalues up to k-1.
RationalPoly spectral_q(const Spectrum& s, int k);

/// R_{k+1}(X) = (Q_{k+1}(X) - Q_{k+1}'(0) X) / X^2 for degree k >= 1.
/// The division is exact by construction; an inexact division signals a logic error.
RationalPoly spectral_r(const Spectrum& s, int k);

/// T_{k+1}(X) = R_{k+1}(X + lambda_k) - R_{k+1}(lambda_k) for degree k >= 1. T_{k+1}(0) = 0.
RationalPoly spectral_t(const Spectrum& s, int k);

/// pi_k = lambda_1 * ... * lambda_k; pi_0 = 1.
Rational eigenvalue_product(const Spectrum& s, int k);

/// Sign table for the chaos bound hypothesis at degree k: the bound needs
/// (-1)^k T_{k+1}(-lambda_n / 2) <= 0 for every n. Checked for n = 0..n_max.
struct SpectralConditionReport {
  int degree = 0;
  int n_max = 0;
  bool spectrum_truncated = false;  // true when only finitely many eigenvalues were checkable
  std::vector<std::pair<int, Rational>> values;      // (n, (-1)^k T_{k+1}(-lambda_n/2))
  std::vector<std::pair<int, Rational>> violations;  // entries with positive value
  bool holds = false;                                // no violation among checked indices
};

/// Requires eigenvalues up to max(k, n_max). For an explicit list shorter than n_max the
/// check covers the whole list and records the truncation.
SpectralConditionReport check_spectral_condition(const Spectrum& s, int k, int n_max);

}  // namespace chaoslab

#include "chaoslab/spectral_polys.hpp"

#include <algorithm>
#include <stdexcept>

namespace chaoslab {

RationalPoly spectral_q(const Spectrum& s, int k) {
  if (k < 0) throw std::invalid_argument("spectral_q: negative degree");
  if (k > 0 && !s.has(k - 1))
    throw std::invalid_argument("spectral_q: spectrum too short for degree " + std::to_string(k));
  RationalPoly q = RationalPoly::constant(Rational(1));
  for (int i = 0; i < k; ++i) q = q * RationalPoly({-s.eigenvalue(i), Rational(1)});
  return q;
}

RationalPoly spectral_r(const Spectrum& s, int k) {
  if (k < 1) throw std::invalid_argument("spectral_r: degree must be >= 1");
  const RationalPoly q = spectral_q(s, k + 1);
  const RationalPoly linear = RationalPoly::monomial(q.coefficient(1), 1);
  return (q - linear).divide_by_x2();
}

RationalPoly spectral_t(const Spectrum& s, int k) {
  if (k < 1) throw std::invalid_argument("spectral_t: degree must be >= 1");
  const RationalPoly r = spectral_r(s, k);
  const Rational lk = s.eigenvalue(k);
  return r.shift(lk) - RationalPoly::constant(r.evaluate(lk));
}

Rational eigenvalue_product(const Spectrum& s, int k) {
  if (k < 0) throw std::invalid_argument("eigenvalue_product: negative index");
  if (k > 0 && !s.has(k))
    throw std::invalid_argument("eigenvalue_product: spectrum too short for pi_" +
                                std::to_string(k));
  Rational p(1);
  for (int i = 1; i <= k; ++i) p *= s.eigenvalue(i);
  return p;
}

SpectralConditionReport check_spectral_condition(const Spectrum& s, int k, int n_max) {
  if (k < 1) throw std::invalid_argument("check_spectral_condition: degree must be >= 1");
  if (n_max < 0) throw std::invalid_argument("check_spectral_condition: negative n_max");
  if (!s.has(k))
    throw std::invalid_argument("check_spectral_condition: spectrum too short for degree " +
                                std::to_string(k));

  SpectralConditionReport report;
  report.degree = k;
  report.n_max = std::min(n_max, s.max_index());
  // Truncated when eigenvalues beyond n_max exist but were not checked.
  report.spectrum_truncated = s.is_rule_naturals() || report.n_max < s.max_index();
  const RationalPoly t = spectral_t(s, k);
  const Rational sign = (k % 2 == 0) ? Rational(1) : Rational(-1);
  const Rational half(1, 2);
  for (int n = 0; n <= report.n_max; ++n) {
    const Rational value = sign * t.evaluate(-half * s.eigenvalue(n));
    report.values.emplace_back(n, value);
    if (value.sign() > 0) report.violations.emplace_back(n, value);
  }
  report.holds = report.violations.empty();
  return report;
}

}  // namespace chaoslab

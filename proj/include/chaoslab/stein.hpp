#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "chaoslab/gamma_calculus.hpp"
#include "chaoslab/sampling.hpp"
#include "chaoslab/spectral_polys.hpp"
#include "chaoslab/spectrum.hpp"

namespace chaoslab {

/// Distance of the law of an eigenfunction F to the standard normal, controlled by the
/// fluctuation of the carre du champ: the exact term is Var(Gamma(F)), which equals
/// int (Gamma - lambda)^2 dmu once int F^2 = 1, and the floating bounds are
/// C sqrt(term) / lambda with C = 1 (Kolmogorov) and C = 2 (total variation).
struct SteinNormalBound {
  Rational eigenvalue;
  Rational variance_term;
  double kolmogorov = 0.0;
  double total_variation = 0.0;
};

/// Distance of the law of F + p to the gamma law g_p, controlled by the exact
/// discrepancy int (Gamma - lambda (F + p))^2 dmu; equals Var(Gamma - lambda F) when
/// int F^2 = p.
struct SteinGammaBound {
  Rational shape;
  Rational eigenvalue;
  Rational discrepancy;
  double kolmogorov = 0.0;
  double total_variation = 0.0;
};

struct DistanceTarget {
  enum class Kind { normal, gamma };
  Kind kind = Kind::normal;
  Rational shape;  // used only for the gamma target

  static DistanceTarget normal() { return {Kind::normal, Rational(0)}; }
  static DistanceTarget gamma(Rational shape) {
    if (shape.sign() <= 0)
      throw std::invalid_argument("stein: gamma shape must be positive");
    return {Kind::gamma, std::move(shape)};
  }
  std::string label() const;
};

enum class DistanceMethod { exact_enumeration, monte_carlo };

struct EmpiricalDistance {
  std::string target;
  std::string method;          // "exact" or "mc"
  double estimate = 0.0;
  double error_proxy = 0.0;    // 0 on the exact path, up to target-CDF evaluation error
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  std::uint64_t rejected = 0;
};

namespace detail {

template <class Function>
void require_eigenfunction(const Function& F, const Rational& lambda) {
  const Function residual = apply_generator(F) + lambda * F;
  if (!pointwise_assertable(residual))
    throw std::invalid_argument("stein: no assertable range for the eigenfunction check");
  if (!is_zero(residual))
    throw std::invalid_argument("stein: base is not an eigenfunction at the given value");
}

}  // namespace detail

template <class Function>
SteinNormalBound normal_bound(const Function& F, const Rational& lambda) {
  if (lambda.sign() <= 0)
    throw std::invalid_argument("stein: eigenvalue must be positive");
  detail::require_eigenfunction(F, lambda);
  const Function gamma = carre_du_champ(F, F);
  SteinNormalBound b;
  b.eigenvalue = lambda;
  b.variance_term = function_variance(gamma);
  b.kolmogorov = std::sqrt(b.variance_term.to_double()) / lambda.to_double();
  b.total_variation = 2.0 * b.kolmogorov;
  return b;
}

template <class Function>
SteinGammaBound gamma_bound(const Function& F, const Rational& lambda,
                            const Rational& shape) {
  if (shape.sign() <= 0)
    throw std::invalid_argument("stein: gamma shape must be positive");
  if (lambda.sign() <= 0)
    throw std::invalid_argument("stein: eigenvalue must be positive");
  detail::require_eigenfunction(F, lambda);
  const Function h = carre_du_champ(F, F) - lambda * F;
  const Rational m = lambda * shape;
  SteinGammaBound b;
  b.shape = shape;
  b.eigenvalue = lambda;
  b.discrepancy = function_norm2(h) - Rational(2) * m * integrate(h) + m * m;
  b.kolmogorov = std::sqrt(b.discrepancy.to_double()) / lambda.to_double();
  b.total_variation = 2.0 * b.kolmogorov;
  return b;
}

namespace detail {

inline void check_gamma_target_preconditions(const Spectrum& s, int k,
                                             const Rational& shape) {
  if (k < 1) throw std::invalid_argument("gamma: chaos degree must be >= 1");
  if (shape.sign() <= 0)
    throw std::invalid_argument("stein: gamma shape must be positive");
  if (!s.is_rule_naturals() && !check_spectral_condition(s, k, s.max_index()).holds)
    throw std::invalid_argument("gamma: spectral sign condition fails for this spectrum");
}

template <class Function>
VerificationReport gamma_target_bound_body(const Spectrum& s, const Function& F,
                                           const Function& gamma,
                                           const VerificationReport& chaos, int k,
                                           const Rational& shape, ReportContext ctx) {
  if (!chaos.pass)
    throw std::invalid_argument("stein: base is not a chaos of the given degree");
  const Rational lambda = s.eigenvalue(k);
  const Function h = gamma - lambda * F;
  const Function f2 = F * F;
  const Function f2g = f2 * gamma;
  const Function fg = F * gamma;
  const Function h2 = h * h;
  const bool skipped = chaos.skipped || !integral_is_exact(f2) ||
                       !integral_is_exact(f2g) || !integral_is_exact(fg) ||
                       !integral_is_exact(h) || !integral_is_exact(h2);
  if (!skipped && integrate(f2) != shape)
    throw std::invalid_argument("stein: second moment does not equal the shape");
  const Rational sign = (k % 2 == 0) ? Rational(1) : Rational(-1);
  const Rational rv = spectral_r(s, k).evaluate(lambda / Rational(2));
  const Rational a = Rational(2) * sign * lambda * rv / eigenvalue_product(s, k - 1);
  const Rational b = lambda / Rational(2) * a;
  const Rational mean_h = integrate(h);
  return detail::bound_report(
      "gamma-target-variance-bound", std::move(ctx),
      integrate(h2) - mean_h * mean_h,
      lambda * integrate(f2g) + a * integrate(fg) - shape * b -
          shape * shape * lambda * lambda,
      skipped);
}

}  // namespace detail

/// Variance bound for the gamma target: for a degree-k chaos F with int F^2 = p, under
/// the spectral sign condition,
///   Var(Gamma - lambda_k F) <= lambda_k int F^2 Gamma + A int F Gamma - p B
///                              - p^2 lambda_k^2,
/// with A = 2 (-1)^k lambda_k R_{k+1}(lambda_k/2) / pi_{k-1} and B = (lambda_k / 2) A.
template <class Function>
VerificationReport verify_gamma_target_bound(const Spectrum& s, const Function& F, int k,
                                             const Rational& shape, ReportContext ctx) {
  detail::check_gamma_target_preconditions(s, k, shape);
  const VerificationReport chaos = is_chaos(s, F, k, ctx);
  const Function gamma = carre_du_champ(F, F);
  return detail::gamma_target_bound_body(s, F, gamma, chaos, k, shape, std::move(ctx));
}

/// Same bound evaluated from an existing tower; the chaos precondition reuses the
/// tower levels instead of rebuilding the raw recursion.
template <class Function>
VerificationReport verify_gamma_target_bound(const Spectrum& s,
                                             const GammaTower<Function>& tower, int k,
                                             const Rational& shape, ReportContext ctx) {
  detail::check_gamma_target_preconditions(s, k, shape);
  const VerificationReport chaos = is_chaos(s, tower, k, ctx);
  return detail::gamma_target_bound_body(s, tower.base, tower.level(1), chaos, k, shape,
                                         std::move(ctx));
}

/// Fourth moment form of the gamma-target bound, diffusion only, even degree, natural
/// spectrum: (3/k^2) Var(Gamma - kF) <= int F^4 - 6 int F^3 + 6p - 3p^2. The two moment
/// identities k int F^4 = 3 int F^2 Gamma and k int F^3 = 2 int F Gamma are re-checked
/// exactly.
template <class Function>
VerificationReport verify_gamma_target_fourth_moment(const Function& F, int k,
                                                     const Rational& shape,
                                                     ReportContext ctx) {
  if (!is_diffusion_v<Function>)
    throw std::invalid_argument("gamma: diffusion identity unavailable on " +
                                std::string(Function::model_name()));
  if (k < 2 || k % 2 != 0)
    throw std::invalid_argument("stein: even chaos degree required");
  if (shape.sign() <= 0)
    throw std::invalid_argument("stein: gamma shape must be positive");
  const Rational lambda(k);
  detail::require_eigenfunction(F, lambda);
  const Function gamma = carre_du_champ(F, F);
  const Function f2 = F * F;
  if (integrate(f2) != shape)
    throw std::invalid_argument("stein: second moment does not equal the shape");
  const Rational f4 = integrate(f2 * f2);
  const Rational f3 = integrate(F * f2);
  if (lambda * f4 != Rational(3) * integrate(f2 * gamma) ||
      lambda * f3 != Rational(2) * integrate(F * gamma))
    throw std::logic_error("stein: diffusion moment identity failed");
  const Rational lhs =
      Rational(3) / Rational(long(k) * k) * function_variance(gamma - lambda * F);
  const Rational rhs = f4 - Rational(6) * f3 + Rational(6) * shape -
                       Rational(3) * shape * shape;
  return detail::bound_report("gamma-target-fourth-moment", std::move(ctx), lhs, rhs,
                              false);
}

/// Standard normal CDF via the complementary error function.
double normal_cdf(double x);
/// Regularized lower incomplete gamma, the CDF of g_p at unit scale; 0 for x <= 0.
double gamma_cdf(double shape, double x);
double target_cdf(const DistanceTarget& target, double x);

/// Kolmogorov distance of a discrete law to the target after the map
/// v -> scale * v (plus the shape shift for the gamma target). Atoms are (value, mass)
/// pairs sorted by value with masses summing to 1; exact path, error_proxy 0.
EmpiricalDistance atom_distance(const std::vector<std::pair<Rational, Rational>>& atoms,
                                double scale, const DistanceTarget& target);
/// Same statistic on a finite sample under v -> scale * v, with the
/// sqrt(ln(2/delta) / (2n)) proxy at delta = 0.05.
EmpiricalDistance sample_distance(SampleResult samples, double scale,
                                  const DistanceTarget& target, std::uint64_t seed);

/// Kolmogorov distance of the empirical law of F (shifted by p for the gamma target)
/// to the target CDF. The exact path enumerates the atoms of the cube law; the Monte
/// Carlo path sorts a sample and reports the distribution-free proxy
/// sqrt(ln(2/delta) / (2n)) at delta = 0.05.
EmpiricalDistance estimate_distance(const CubeModel& model, const CubeFunction& F,
                                    const DistanceTarget& target, DistanceMethod method,
                                    std::size_t n_samples = 0, std::uint64_t seed = 0);
EmpiricalDistance estimate_distance(const OuModel& model, const PolyFunction& F,
                                    const DistanceTarget& target, std::size_t n_samples,
                                    std::uint64_t seed);
EmpiricalDistance estimate_distance(const PoissonModel& model, const PoissonFunction& F,
                                    const DistanceTarget& target, std::size_t n_samples,
                                    std::uint64_t seed);

}  // namespace chaoslab

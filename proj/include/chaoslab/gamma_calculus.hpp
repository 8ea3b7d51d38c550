#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "chaoslab/cube.hpp"
#include "chaoslab/ou.hpp"
#include "chaoslab/poisson.hpp"
#include "chaoslab/rational.hpp"
#include "chaoslab/rational_poly.hpp"
#include "chaoslab/spectral_polys.hpp"
#include "chaoslab/spectrum.hpp"

namespace chaoslab {

struct ReportContext {
  std::string model;
  int dimension = 0;
  int degree = 0;
  std::uint64_t seed = 0;
};

/// Outcome of one identity or bound check. For exact identities residual = lhs - rhs and
/// pass means residual = 0; for bounds residual = rhs - lhs (the slack) and pass means
/// slack >= 0. skipped marks checks excluded because a truncated-lattice integrand was
/// boundary-contaminated; skipped reports count as passing but are flagged in the CSV.
struct VerificationReport {
  std::string identity;
  ReportContext context;
  Rational lhs;
  Rational rhs;
  Rational residual;
  bool pass = false;
  bool skipped = false;
};

std::string verification_csv_header();
std::string verification_csv_row(const VerificationReport& r);

template <class Function>
inline constexpr bool is_diffusion_v = false;
template <>
inline constexpr bool is_diffusion_v<PolyFunction> = true;

constexpr bool pointwise_assertable(const CubeFunction&) { return true; }
constexpr bool pointwise_assertable(const PolyFunction&) { return true; }
inline bool pointwise_assertable(const PoissonFunction& f) { return f.valid_upto() >= 0; }

template <class Function>
Rational function_norm2(const Function& f) {
  return integrate(f * f);
}

template <class Function>
Rational function_variance(const Function& f) {
  const Rational mean = integrate(f);
  return function_norm2(f) - mean * mean;
}

/// Carre du champ from the generator: Gamma(f,g) = (1/2)[L(fg) - f Lg - g Lf].
template <class Function>
Function carre_du_champ(const Function& f, const Function& g) {
  if (!same_space(f, g)) throw std::invalid_argument("gamma: operand space mismatch");
  const Function sum = apply_generator(f * g) - f * apply_generator(g) -
                       g * apply_generator(f);
  return Rational(1, 2) * sum;
}

/// Raw iterated gradients [Gamma_1(f,g), ..., Gamma_m(f,g)] by the defining recursion
/// Gamma_r(f,g) = (1/2)[L Gamma_{r-1}(f,g) - Gamma_{r-1}(f, Lg) - Gamma_{r-1}(g, Lf)],
/// carried over the table G_r[a][b] = Gamma_r(L^a f, L^b g) so each level costs one
/// generator application per surviving cell.
template <class Function>
std::vector<Function> iterated_gradient_tower(const Function& f, const Function& g,
                                              int m_max) {
  if (m_max < 1) throw std::invalid_argument("gamma: tower depth must be >= 1");
  if (!same_space(f, g)) throw std::invalid_argument("gamma: operand space mismatch");

  std::vector<Function> fpow{f}, gpow{g};
  for (int a = 1; a <= m_max; ++a) {
    fpow.push_back(apply_generator(fpow.back()));
    gpow.push_back(apply_generator(gpow.back()));
  }

  std::vector<std::vector<Function>> table;
  for (int a = 0; a <= m_max; ++a) {
    std::vector<Function> row;
    for (int b = 0; a + b <= m_max; ++b) row.push_back(fpow[a] * gpow[b]);
    table.push_back(std::move(row));
  }

  const Rational half(1, 2);
  std::vector<Function> out;
  out.reserve(m_max);
  for (int r = 1; r <= m_max; ++r) {
    const int cap = m_max - r;
    std::vector<std::vector<Function>> next;
    for (int a = 0; a <= cap; ++a) {
      std::vector<Function> row;
      for (int b = 0; a + b <= cap; ++b)
        row.push_back(half *
                      (apply_generator(table[a][b]) - table[a][b + 1] - table[a + 1][b]));
      next.push_back(std::move(row));
    }
    table = std::move(next);
    out.push_back(table[0][0]);
  }
  return out;
}

/// Gamma_m(f,g); m = 0 gives the product fg.
template <class Function>
Function iterated_gradient(const Function& f, const Function& g, int m) {
  if (m < 0) throw std::invalid_argument("gamma: negative gradient order");
  if (m == 0) {
    if (!same_space(f, g)) throw std::invalid_argument("gamma: operand space mismatch");
    return f * g;
  }
  return iterated_gradient_tower(f, g, m).back();
}

/// Iterated gradients of an exact eigenfunction, -LF = lambda F. Levels are built by the
/// eigenfunction shortcut Gamma_m = ((1/2)L + lambda)^{m-1} Gamma and cross-checked
/// against the raw recursion; any disagreement on the assertable range is a hard error.
template <class Function>
struct GammaTower {
  Function base;
  Rational eigenvalue;
  std::vector<Function> levels;

  int max_level() const { return static_cast<int>(levels.size()); }

  /// Gamma_m(F), 1-based; level(0) is not stored (it is base*base).
  const Function& level(int m) const {
    if (m < 1 || m > max_level()) throw std::out_of_range("gamma: tower level out of range");
    return levels[static_cast<std::size_t>(m - 1)];
  }
};

namespace detail {

inline void check_gamma_sign(const CubeFunction& g) {
  for (Eigen::Index p = 0; p < g.point_count(); ++p)
    if (g[p].sign() < 0) throw std::logic_error("gamma: negative carre du champ value");
}

inline void check_gamma_sign(const PoissonFunction& g) {
  for (int j = 0; j <= g.valid_upto(); ++j)
    if (g[j].sign() < 0) throw std::logic_error("gamma: negative carre du champ value");
}

/// Sample-point witness: the polynomial case is structurally a sum of squares, checked
/// here on a fixed grid of rational points.
void check_gamma_sign(const PolyFunction& g);

}  // namespace detail

template <class Function>
GammaTower<Function> build_gamma_tower(const Function& F, const Rational& lambda,
                                       int m_max) {
  if (m_max < 1) throw std::invalid_argument("gamma: tower depth must be >= 1");
  const Function eigen_residual = apply_generator(F) + lambda * F;
  if (!pointwise_assertable(eigen_residual))
    throw std::invalid_argument("gamma: no assertable range for the eigenfunction check");
  if (!is_zero(eigen_residual))
    throw std::invalid_argument("gamma: base is not an eigenfunction at the given value");

  GammaTower<Function> tower{F, lambda, {}};
  tower.levels.reserve(static_cast<std::size_t>(m_max));
  tower.levels.push_back(carre_du_champ(F, F));
  detail::check_gamma_sign(tower.levels.front());
  const Rational half(1, 2);
  for (int m = 2; m <= m_max; ++m) {
    const Function& prev = tower.levels.back();
    tower.levels.push_back(half * apply_generator(prev) + lambda * prev);
  }

  const std::vector<Function> raw = iterated_gradient_tower(F, F, m_max);
  for (int m = 1; m <= m_max; ++m) {
    const Function diff = tower.levels[static_cast<std::size_t>(m - 1)] -
                          raw[static_cast<std::size_t>(m - 1)];
    if (!pointwise_assertable(diff))
      throw std::invalid_argument("gamma: truncation too small to cross-check the tower");
    if (!is_zero(diff))
      throw std::logic_error("gamma: shortcut and raw towers disagree");
  }
  return tower;
}

/// Q_k(Gamma)(F) = sum_{i=1}^{k} c_i Gamma_i with c_i the X^i coefficient of Q_k.
template <class Function>
Function q_of_gamma(const Spectrum& s, const GammaTower<Function>& tower, int k) {
  if (k < 1) throw std::invalid_argument("gamma: Q form degree must be >= 1");
  if (tower.max_level() < k)
    throw std::invalid_argument("gamma: tower too shallow for the Q form");
  const RationalPoly q = spectral_q(s, k);
  Function acc = q.coefficient(1) * tower.level(1);
  for (int i = 2; i <= k; ++i) acc = acc + q.coefficient(i) * tower.level(i);
  return acc;
}

/// Same linear combination over raw iterated gradients; valid without the eigenfunction
/// hypothesis.
template <class Function>
Function q_of_gamma_raw(const Spectrum& s, const Function& F, int k) {
  if (k < 1) throw std::invalid_argument("gamma: Q form degree must be >= 1");
  const RationalPoly q = spectral_q(s, k);
  const std::vector<Function> tower = iterated_gradient_tower(F, F, k);
  Function acc = q.coefficient(1) * tower[0];
  for (int i = 2; i <= k; ++i)
    acc = acc + q.coefficient(i) * tower[static_cast<std::size_t>(i - 1)];
  return acc;
}

/// P(L/2) f by Horner in the operator argument: deg(P) generator applications.
template <class Function>
Function apply_half_generator_poly(const RationalPoly& p, const Function& f) {
  const int d = p.degree();
  if (d < 0) return Rational(0) * f;
  Function acc = p.coefficient(d) * f;
  const Rational half(1, 2);
  for (int j = d - 1; j >= 0; --j)
    acc = half * apply_generator(acc) + p.coefficient(j) * f;
  return acc;
}

namespace detail {

inline VerificationReport exact_report(std::string identity, ReportContext ctx,
                                       Rational lhs, Rational rhs, bool skipped) {
  VerificationReport r;
  r.identity = std::move(identity);
  r.context = std::move(ctx);
  r.lhs = std::move(lhs);
  r.rhs = std::move(rhs);
  r.residual = r.lhs - r.rhs;
  r.skipped = skipped;
  r.pass = skipped || r.residual.is_zero();
  return r;
}

inline VerificationReport bound_report(std::string identity, ReportContext ctx,
                                       Rational lhs, Rational rhs, bool skipped) {
  VerificationReport r;
  r.identity = std::move(identity);
  r.context = std::move(ctx);
  r.lhs = std::move(lhs);
  r.rhs = std::move(rhs);
  r.residual = r.rhs - r.lhs;
  r.skipped = skipped;
  r.pass = skipped || r.residual.sign() >= 0;
  return r;
}

}  // namespace detail

/// Degree-k chaos test: -LF = lambda_k F exactly and Q_{k+1}(Gamma)(F) = 0 on the
/// assertable range. lhs reports the squared norm of the Q form.
template <class Function>
VerificationReport is_chaos(const Spectrum& s, const Function& F, int k,
                            ReportContext ctx) {
  if (k < 1) throw std::invalid_argument("gamma: chaos degree must be >= 1");
  const Rational lambda = s.eigenvalue(k);
  const Function eigen_residual = apply_generator(F) + lambda * F;
  const Function q = q_of_gamma_raw(s, F, k + 1);
  if (!pointwise_assertable(eigen_residual) || !pointwise_assertable(q)) {
    VerificationReport r =
        detail::exact_report("chaos", std::move(ctx), Rational(0), Rational(0), true);
    return r;
  }
  VerificationReport r = detail::exact_report("chaos", std::move(ctx), function_norm2(q),
                                              Rational(0), false);
  r.pass = is_zero(eigen_residual) && is_zero(q);
  return r;
}

template <class Function>
VerificationReport is_chaos(const Spectrum& s, const GammaTower<Function>& tower, int k,
                            ReportContext ctx) {
  if (k < 1) throw std::invalid_argument("gamma: chaos degree must be >= 1");
  if (tower.eigenvalue != s.eigenvalue(k))
    throw std::invalid_argument("gamma: tower eigenvalue does not match the spectrum");
  const Function q = q_of_gamma(s, tower, k + 1);
  if (!pointwise_assertable(q))
    return detail::exact_report("chaos", std::move(ctx), Rational(0), Rational(0), true);
  VerificationReport r = detail::exact_report("chaos", std::move(ctx), function_norm2(q),
                                              Rational(0), false);
  r.pass = is_zero(q);
  return r;
}

/// L Q_k(Gamma)(F) = 2 Q_{k+1}(Gamma)(F), exact for any eigenfunction tower.
template <class Function>
VerificationReport verify_q_derivative_link(const Spectrum& s,
                                            const GammaTower<Function>& tower, int k,
                                            ReportContext ctx) {
  if (k < 1) throw std::invalid_argument("gamma: Q form degree must be >= 1");
  if (tower.eigenvalue != s.eigenvalue(k))
    throw std::invalid_argument("gamma: tower eigenvalue does not match the spectrum");
  const Function lhs_fn = apply_generator(q_of_gamma(s, tower, k));
  const Function rhs_fn = Rational(2) * q_of_gamma(s, tower, k + 1);
  const Function diff = lhs_fn - rhs_fn;
  if (!pointwise_assertable(diff))
    return detail::exact_report("q-derivative-link", std::move(ctx), Rational(0),
                                Rational(0), true);
  VerificationReport r = detail::exact_report(
      "q-derivative-link", std::move(ctx), function_norm2(diff), Rational(0), false);
  r.pass = is_zero(diff);
  return r;
}

/// Mean of the Q form: integral of Q_k(Gamma)(F) equals Q_k(lambda_k) * integral of F^2.
template <class Function>
VerificationReport verify_q_mean(const Spectrum& s, const GammaTower<Function>& tower,
                                 int k, ReportContext ctx) {
  if (k >= 1 && tower.eigenvalue != s.eigenvalue(k))
    throw std::invalid_argument("gamma: tower eigenvalue does not match the spectrum");
  const Function q = q_of_gamma(s, tower, k);
  const Function f2 = tower.base * tower.base;
  const bool skipped = !integral_is_exact(q) || !integral_is_exact(f2);
  return detail::exact_report(
      "q-mean", std::move(ctx), integrate(q),
      spectral_q(s, k).evaluate(s.eigenvalue(k)) * integrate(f2), skipped);
}

/// Integral shift along the tower: the (n,m) instance of
/// int Gamma_n Gamma_m = int Gamma_{n-1} Gamma_{m+1}, with Gamma_0 = F^2; m, n >= 1.
template <class Function>
VerificationReport verify_integral_shift(const GammaTower<Function>& tower, int n, int m,
                                         ReportContext ctx) {
  if (n < 1 || m < 1)
    throw std::invalid_argument("gamma: shift identity needs n >= 1 and m >= 1");
  if (tower.max_level() < std::max(n, m + 1))
    throw std::invalid_argument("gamma: tower too shallow for the shift identity");
  const Function left = tower.level(n) * tower.level(m);
  const Function right =
      (n == 1 ? tower.base * tower.base : tower.level(n - 1)) * tower.level(m + 1);
  const bool skipped = !integral_is_exact(left) || !integral_is_exact(right);
  return detail::exact_report(
      "gamma-shift-n" + std::to_string(n) + "-m" + std::to_string(m), std::move(ctx),
      integrate(left), integrate(right), skipped);
}

/// Fundamental variance identity for a degree-k chaos tower:
/// pi_{k-1} int Gamma^2 = pi_k int F^2 Gamma + (-1)^k int Gamma T_{k+1}(L/2) Gamma.
template <class Function>
VerificationReport verify_variance_identity(const Spectrum& s,
                                            const GammaTower<Function>& tower, int k,
                                            ReportContext ctx) {
  if (k < 1) throw std::invalid_argument("gamma: chaos degree must be >= 1");
  if (tower.eigenvalue != s.eigenvalue(k))
    throw std::invalid_argument("gamma: tower eigenvalue does not match the spectrum");
  const Function& gamma = tower.level(1);
  const Function g2 = gamma * gamma;
  const Function f2g = tower.base * tower.base * gamma;
  const Function gtg = gamma * apply_half_generator_poly(spectral_t(s, k), gamma);
  const bool skipped = !integral_is_exact(g2) || !integral_is_exact(f2g) ||
                       !integral_is_exact(gtg);
  const Rational sign = (k % 2 == 0) ? Rational(1) : Rational(-1);
  return detail::exact_report(
      "variance-identity", std::move(ctx), eigenvalue_product(s, k - 1) * integrate(g2),
      eigenvalue_product(s, k) * integrate(f2g) + sign * integrate(gtg), skipped);
}

/// Chaos variance bound in homogeneous form: with c = int F^2,
/// Var(Gamma) <= lambda_k (int F^2 Gamma - lambda_k c^2). Requires the spectral sign
/// condition, guaranteed on the naturals and re-checked for explicit spectra.
template <class Function>
VerificationReport verify_variance_bound(const Spectrum& s,
                                         const GammaTower<Function>& tower, int k,
                                         ReportContext ctx) {
  if (k < 1) throw std::invalid_argument("gamma: chaos degree must be >= 1");
  if (!s.is_rule_naturals() && !check_spectral_condition(s, k, s.max_index()).holds)
    throw std::invalid_argument("gamma: spectral sign condition fails for this spectrum");
  if (tower.eigenvalue != s.eigenvalue(k))
    throw std::invalid_argument("gamma: tower eigenvalue does not match the spectrum");
  const Rational lambda = s.eigenvalue(k);
  const Function& gamma = tower.level(1);
  const Function f2 = tower.base * tower.base;
  const Function g2 = gamma * gamma;
  const Function f2g = f2 * gamma;
  const bool skipped = !integral_is_exact(gamma) || !integral_is_exact(f2) ||
                       !integral_is_exact(g2) || !integral_is_exact(f2g);
  const Rational c = integrate(f2);
  const Rational mean_gamma = integrate(gamma);
  VerificationReport r = detail::bound_report(
      "variance-bound", std::move(ctx), integrate(g2) - mean_gamma * mean_gamma,
      lambda * integrate(f2g) - lambda * lambda * c * c, skipped);
  if (!skipped && mean_gamma != lambda * c) {
    r.pass = false;
    r.identity += "-mean-mismatch";
  }
  return r;
}

/// Diffusion-only fourth moment form: checks lambda int F^4 = 3 int F^2 Gamma exactly
/// and the homogeneous bound Var(Gamma) <= lambda^2 ((1/3) int F^4 - c^2).
template <class Function>
VerificationReport fourth_moment_form(const GammaTower<Function>& tower, int k,
                                      ReportContext ctx) {
  if (!is_diffusion_v<Function>)
    throw std::invalid_argument("gamma: diffusion identity unavailable on " +
                                std::string(Function::model_name()));
  if (k < 1) throw std::invalid_argument("gamma: chaos degree must be >= 1");
  const Rational lambda = tower.eigenvalue;
  const Function& gamma = tower.level(1);
  const Function f2 = tower.base * tower.base;
  const Rational c = integrate(f2);
  const Rational f4 = integrate(f2 * f2);
  const Rational f2g = integrate(f2 * gamma);
  VerificationReport r = detail::bound_report(
      "fourth-moment-bound", std::move(ctx), function_variance(gamma),
      lambda * lambda * (Rational(1, 3) * f4 - c * c), false);
  if (lambda * f4 != Rational(3) * f2g) {
    r.pass = false;
    r.identity += "-diffusion-identity-mismatch";
  }
  return r;
}

/// Exact curvature identity for the polynomial model: for any polynomial f and rho,
/// Gamma_2(f) - rho Gamma(f) = |Hess f|^2 + (1 - rho)|grad f|^2, a sum of squares
/// whenever rho <= 1. When rho = 1 and f is an eigenfunction at 1, Gamma(f) must be
/// constant.
VerificationReport check_curvature_rigidity(const PolyFunction& f, const Rational& rho,
                                            ReportContext ctx);

/// Pointwise curvature probe on the cube: lhs is the minimum of Gamma_2(f) - rho
/// Gamma(f) over all points; pass records whether it is nonnegative.
VerificationReport check_curvature_pointwise(const CubeFunction& f, const Rational& rho,
                                             ReportContext ctx);

/// Cube-only second route to the Q form: (1/4^k) sum of squared k-fold coordinate
/// differences over ordered tuples of distinct indices.
CubeFunction cube_iterated_difference_form(const CubeFunction& F, int k);

Rational pointwise_minimum(const CubeFunction& f);

/// Even-degree relaxation probe: for an arbitrary cube function F, records the pointwise
/// minimum of Q_{k+1}(Gamma)(F) alongside the two sides of the variance bound
/// int Gamma^2 <= lambda_k int F^2 Gamma.
struct NearChaosProbe {
  Rational q_pointwise_min;
  Rational bound_lhs;
  Rational bound_rhs;
  bool sign_condition = false;
  bool bound_holds = false;
  bool implication_ok = false;
};

NearChaosProbe near_chaos_probe(const Spectrum& s, const CubeFunction& F, int k);

/// Generator of the cube model as an explicit dense matrix over the 2^N point basis.
RationalMatrix cube_generator_matrix(const CubeModel& model);

/// Finite-model probe of the spectral positivity equivalence: int u P(L) u >= 0 for every u
/// iff P(-lambda_n) >= 0 over the model spectrum. Each random u is evaluated through
/// two routes (matrix Horner and the Walsh spectral decomposition) which must agree
/// exactly; negative predictions are certified by an explicit Walsh witness.
struct SpectralPositivityCheck {
  std::vector<Rational> p_at_eigenvalues;
  bool predicted_nonneg = false;
  bool routes_agree = false;
  bool witness_found = false;
  Rational min_form_value;
  bool equivalence_confirmed = false;
};

SpectralPositivityCheck check_spectral_positivity(const CubeModel& model,
                                                  const RationalPoly& p, int n_random,
                                                  std::uint64_t seed);

}  // namespace chaoslab

#include "chaoslab/gamma_calculus.hpp"

#include <bit>
#include <cstdint>
#include <functional>
#include <sstream>
#include <vector>

#include "chaoslab/rng.hpp"

namespace chaoslab {

std::string verification_csv_header() {
  return "identity,model,N,k,seed,lhs,rhs,residual,pass";
}

std::string verification_csv_row(const VerificationReport& r) {
  std::ostringstream os;
  os << r.identity << (r.skipped ? "[boundary-skip]" : "") << ',' << r.context.model
     << ',' << r.context.dimension << ',' << r.context.degree << ',' << r.context.seed
     << ',' << r.lhs << ',' << r.rhs << ',' << r.residual << ',' << (r.pass ? 1 : 0);
  return os.str();
}

namespace detail {

void check_gamma_sign(const PolyFunction& g) {
  const int n = g.dimension();
  std::vector<Rational> point(static_cast<std::size_t>(n));
  const auto probe = [&](const std::vector<Rational>& pt) {
    if (g.evaluate(pt).sign() < 0)
      throw std::logic_error("gamma: negative carre du champ value");
  };
  if (n <= 3) {
    const int grid = 5;
    int total = 1;
    for (int i = 0; i < n; ++i) total *= grid;
    for (int t = 0; t < total; ++t) {
      int rest = t;
      for (int i = 0; i < n; ++i) {
        point[static_cast<std::size_t>(i)] = Rational(rest % grid - 2);
        rest /= grid;
      }
      probe(point);
    }
    return;
  }
  std::mt19937_64 engine = make_engine(0, 0x67616d6dULL);
  for (int t = 0; t < 64; ++t) {
    for (int i = 0; i < n; ++i)
      point[static_cast<std::size_t>(i)] =
          Rational(static_cast<long>(engine() % 5) - 2);
    probe(point);
  }
}

}  // namespace detail

VerificationReport check_curvature_rigidity(const PolyFunction& f, const Rational& rho,
                                            ReportContext ctx) {
  const PolyFunction gamma = carre_du_champ(f, f);
  const PolyFunction lhs_fn = iterated_gradient(f, f, 2) - rho * gamma;
  const PolyFunction rhs_fn =
      iterated_gradient_square(f, 2) + (Rational(1) - rho) * iterated_gradient_square(f, 1);
  const PolyFunction diff = lhs_fn - rhs_fn;

  VerificationReport r;
  r.identity = "curvature-rigidity";
  r.context = std::move(ctx);
  r.lhs = function_norm2(diff);
  r.rhs = Rational(0);
  r.residual = r.lhs;
  r.pass = is_zero(diff);

  if (Rational(1) < rho) {
    r.pass = false;
    r.identity += "-above-sos-range";
  }
  if (rho == Rational(1)) {
    const PolyFunction eigen_residual = apply_generator(f) + f;
    if (is_zero(eigen_residual) && !constant_value(gamma).has_value()) {
      r.pass = false;
      r.identity += "-nonconstant-gamma";
    }
  }
  return r;
}

VerificationReport check_curvature_pointwise(const CubeFunction& f, const Rational& rho,
                                             ReportContext ctx) {
  const CubeFunction d = iterated_gradient(f, f, 2) - rho * carre_du_champ(f, f);
  VerificationReport r;
  r.identity = "curvature-pointwise";
  r.context = std::move(ctx);
  r.lhs = pointwise_minimum(d);
  r.rhs = Rational(0);
  r.residual = r.lhs;
  r.pass = r.residual.sign() >= 0;
  return r;
}

CubeFunction cube_iterated_difference_form(const CubeFunction& F, int k) {
  if (k < 1) throw std::invalid_argument("gamma: difference form order must be >= 1");
  const int n = F.dimension();
  const CubeModel model(n);
  CubeFunction acc = model.constant(Rational(0));
  std::function<void(const CubeFunction&, std::uint32_t, int)> rec =
      [&](const CubeFunction& cur, std::uint32_t used, int depth) {
        if (depth == k) {
          acc = acc + cur * cur;
          return;
        }
        for (int i = 1; i <= n; ++i) {
          const std::uint32_t bit = std::uint32_t(1) << (i - 1);
          if (used & bit) continue;
          rec(coordinate_difference(cur, i), used | bit, depth + 1);
        }
      };
  rec(F, 0, 0);
  Integer four_k = 1;
  for (int i = 0; i < k; ++i) four_k *= 4;
  return Rational(Integer(1), four_k) * acc;
}

Rational pointwise_minimum(const CubeFunction& f) {
  Rational m = f[0];
  for (Eigen::Index p = 1; p < f.point_count(); ++p)
    if (f[p] < m) m = f[p];
  return m;
}

NearChaosProbe near_chaos_probe(const Spectrum& s, const CubeFunction& F, int k) {
  if (k < 1) throw std::invalid_argument("gamma: chaos degree must be >= 1");
  const CubeFunction gamma = carre_du_champ(F, F);
  NearChaosProbe p;
  p.q_pointwise_min = pointwise_minimum(q_of_gamma_raw(s, F, k + 1));
  p.bound_lhs = integrate(gamma * gamma);
  p.bound_rhs = s.eigenvalue(k) * integrate(F * F * gamma);
  p.sign_condition = p.q_pointwise_min.sign() >= 0;
  p.bound_holds = p.bound_lhs <= p.bound_rhs;
  p.implication_ok = !p.sign_condition || p.bound_holds;
  return p;
}

RationalMatrix cube_generator_matrix(const CubeModel& model) {
  const Eigen::Index size = model.point_count();
  const int n = model.dimension();
  RationalMatrix m = RationalMatrix::Zero(size, size);
  const Rational half(1, 2);
  for (Eigen::Index p = 0; p < size; ++p) {
    for (int i = 0; i < n; ++i) m(p, p ^ (Eigen::Index(1) << i)) = half;
    m(p, p) = Rational(-n, 2);
  }
  return m;
}

SpectralPositivityCheck check_spectral_positivity(const CubeModel& model,
                                                  const RationalPoly& p, int n_random,
                                                  std::uint64_t seed) {
  if (n_random < 0) throw std::invalid_argument("gamma: negative sample count");
  const int n = model.dimension();
  const Eigen::Index size = model.point_count();
  const Rational inv_mass(Integer(1), Integer(1) << n);

  SpectralPositivityCheck out;
  out.predicted_nonneg = true;
  for (int lvl = 0; lvl <= n; ++lvl) {
    out.p_at_eigenvalues.push_back(p.evaluate(Rational(-lvl)));
    if (out.p_at_eigenvalues.back().sign() < 0) out.predicted_nonneg = false;
  }

  const RationalMatrix lm = cube_generator_matrix(model);
  const auto horner_form = [&](const RationalVector& u) {
    const int d = p.degree();
    RationalVector v = RationalVector::Zero(size);
    if (d >= 0) {
      v = p.coefficient(d) * u;
      for (int j = d - 1; j >= 0; --j) v = (lm * v + p.coefficient(j) * u).eval();
    }
    return inv_mass * u.dot(v);
  };
  const auto spectral_form = [&](const RationalVector& u) {
    Rational acc(0);
    for (const auto& [subset, coeff] : walsh_coefficients(model.from_values(u)))
      acc += p.evaluate(Rational(-std::popcount(subset))) * coeff * coeff;
    return acc;
  };

  out.routes_agree = true;
  bool have_min = false;
  const auto test_vector = [&](const RationalVector& u) {
    const Rational a = horner_form(u);
    if (a != spectral_form(u)) out.routes_agree = false;
    if (!have_min || a < out.min_form_value) {
      out.min_form_value = a;
      have_min = true;
    }
    return a;
  };

  std::mt19937_64 engine = make_engine(seed, 0x706f73ULL);
  for (int t = 0; t < n_random; ++t) {
    RationalVector u(size);
    for (Eigen::Index i = 0; i < size; ++i) {
      const long num = static_cast<long>(engine() % 13) - 6;
      const long den = static_cast<long>(engine() % 3) + 1;
      u[i] = Rational(num, den);
    }
    test_vector(u);
  }

  if (!out.predicted_nonneg) {
    for (int lvl = 0; lvl <= n; ++lvl) {
      if (out.p_at_eigenvalues[static_cast<std::size_t>(lvl)].sign() >= 0) continue;
      const std::uint32_t mask = (std::uint32_t(1) << lvl) - 1;
      const Rational witness = test_vector(model.walsh(mask).values());
      out.witness_found =
          witness == out.p_at_eigenvalues[static_cast<std::size_t>(lvl)] &&
          witness.sign() < 0;
      break;
    }
  }

  out.equivalence_confirmed =
      out.routes_agree && (out.predicted_nonneg ? (!have_min || out.min_form_value.sign() >= 0)
                                                : out.witness_found);
  return out;
}

}  // namespace chaoslab

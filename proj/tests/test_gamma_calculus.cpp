#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <random>
#include <vector>

#include "chaoslab/chaos_spec.hpp"
#include "chaoslab/gamma_calculus.hpp"
#include "chaoslab/rng.hpp"

using namespace chaoslab;

namespace {

ReportContext ctx(const char* model, int n, int k, std::uint64_t seed = 0) {
  return ReportContext{model, n, k, seed};
}

CubeFunction random_cube_function(const CubeModel& model, std::uint64_t seed) {
  std::mt19937_64 rng = make_engine(seed, 0x6763ULL);
  RationalVector v(model.point_count());
  for (Eigen::Index p = 0; p < v.size(); ++p) {
    const long num = static_cast<long>(rng() % 21) - 10;
    const long den = static_cast<long>(rng() % 5) + 1;
    v[p] = Rational(num, den);
  }
  return model.from_values(std::move(v));
}

PoissonFunction random_poisson_function(const PoissonModel& model, std::uint64_t seed) {
  std::mt19937_64 rng = make_engine(seed, 0x6770ULL);
  RationalVector v(model.truncation() + 1);
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    const long num = static_cast<long>(rng() % 21) - 10;
    const long den = static_cast<long>(rng() % 5) + 1;
    v[j] = Rational(num, den);
  }
  return model.from_values(std::move(v));
}

PolyFunction random_poly(const OuModel& model, std::uint64_t seed, int max_degree) {
  std::mt19937_64 rng = make_engine(seed, 0x676fULL);
  PolyFunction f(model.dimension());
  for (int t = 0; t < 6; ++t) {
    Exponents e(static_cast<std::size_t>(model.dimension()), 0);
    int budget = static_cast<int>(rng() % (static_cast<unsigned>(max_degree) + 1));
    for (int i = 0; i < model.dimension() && budget > 0; ++i) {
      const int take = static_cast<int>(rng() % (static_cast<unsigned>(budget) + 1));
      e[static_cast<std::size_t>(i)] = static_cast<unsigned>(take);
      budget -= take;
    }
    const long num = static_cast<long>(rng() % 13) - 6;
    const long den = static_cast<long>(rng() % 3) + 1;
    f.add_term(e, Rational(num, den));
  }
  return f;
}

Chaos<CubeFunction> cube_chaos(const CubeModel& model, int k, std::uint64_t seed) {
  return materialize_chaos(random_chaos(ModelTag::cube, model.dimension(), k, seed),
                           model);
}

Chaos<PolyFunction> ou_chaos(const OuModel& model, int k, std::uint64_t seed) {
  return materialize_chaos(random_chaos(ModelTag::ou, model.dimension(), k, seed), model);
}

}  // namespace

TEST_CASE("carre du champ on the three models") {
  const OuModel ou(2);
  CHECK(constant_value(carre_du_champ(ou.coordinate(1), ou.coordinate(1))) ==
        Rational(1));

  // Gamma(x1 x2) = x1^2 + x2^2, and the bracket agrees with the gradient form.
  const PolyFunction f = ou.coordinate(1) * ou.coordinate(2);
  CHECK(is_zero(carre_du_champ(f, f) - gradient_dot(f, f)));

  const CubeModel cube(2);
  CHECK(constant_value(carre_du_champ(cube.walsh(0b11), cube.walsh(0b11))) ==
        Rational(2));

  const PoissonModel poisson(Rational(1), 8);
  const PoissonFunction c1 = poisson.charlier(1);
  const PoissonFunction gam = carre_du_champ(c1, c1);
  REQUIRE(gam.valid_upto() == 6);
  for (int j = 0; j <= gam.valid_upto(); ++j) CHECK(gam[j] == Rational(1 + j, 2));

  // symmetry and pointwise sign over random functions
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const CubeModel m4(4);
    const CubeFunction a = random_cube_function(m4, seed);
    const CubeFunction b = random_cube_function(m4, seed + 1000);
    CHECK(is_zero(carre_du_champ(a, b) - carre_du_champ(b, a)));
    const CubeFunction ga = carre_du_champ(a, a);
    for (Eigen::Index p = 0; p < ga.point_count(); ++p) CHECK(ga[p].sign() >= 0);
  }
  const PoissonModel pm(Rational(2), 10);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const PoissonFunction a = random_poisson_function(pm, seed);
    const PoissonFunction ga = carre_du_champ(a, a);
    REQUIRE(ga.valid_upto() == 8);
    for (int j = 0; j <= ga.valid_upto(); ++j) CHECK(ga[j].sign() >= 0);
  }
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const OuModel m3(3);
    const PolyFunction a = random_poly(m3, seed, 3);
    CHECK(is_zero(carre_du_champ(a, a) - gradient_dot(a, a)));
    CHECK_NOTHROW(detail::check_gamma_sign(carre_du_champ(a, a)));
  }

  CHECK_THROWS_AS(carre_du_champ(CubeModel(2).walsh(1), CubeModel(3).walsh(1)),
                  std::invalid_argument);
}

TEST_CASE("iterated gradients by the raw recursion") {
  const OuModel ou(1);
  const PolyFunction x = ou.coordinate(1);
  CHECK(is_zero(iterated_gradient(x, x, 0) - x * x));
  CHECK(constant_value(iterated_gradient(x, x, 2)) == Rational(1));

  const CubeModel cube(2);
  const CubeFunction w = cube.walsh(0b11);
  CHECK(constant_value(iterated_gradient(w, w, 2)) == Rational(4));

  // Gamma_2 = |Hess|^2 + |grad|^2 on the Gaussian model
  const OuModel ou2(2);
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const PolyFunction f = random_poly(ou2, seed, 4);
    const PolyFunction explicit_g2 =
        iterated_gradient_square(f, 2) + iterated_gradient_square(f, 1);
    CHECK(is_zero(iterated_gradient(f, f, 2) - explicit_g2));
  }

  CHECK_THROWS_AS(iterated_gradient(x, x, -1), std::invalid_argument);
  CHECK_THROWS_AS(iterated_gradient_tower(x, x, 0), std::invalid_argument);
}

TEST_CASE("gamma towers verify the eigenfunction shortcut") {
  const OuModel ou(1);
  const PolyFunction x = ou.coordinate(1);
  const GammaTower<PolyFunction> tx = build_gamma_tower(x, Rational(1), 3);
  for (int m = 1; m <= 3; ++m) CHECK(constant_value(tx.level(m)) == Rational(1));

  const PolyFunction h2 = ou.monomial({2}, Rational(1)) - ou.constant(Rational(1));
  const GammaTower<PolyFunction> th = build_gamma_tower(h2, Rational(2), 2);
  PolyFunction g(1);
  g.add_term({2}, Rational(4));
  CHECK(is_zero(th.level(1) - g));
  g.add_term({0}, Rational(4));
  CHECK(is_zero(th.level(2) - g));

  const CubeModel cube(2);
  const GammaTower<CubeFunction> tw = build_gamma_tower(cube.walsh(0b11), Rational(2), 3);
  CHECK(constant_value(tw.level(1)) == Rational(2));
  CHECK(constant_value(tw.level(2)) == Rational(4));
  CHECK(constant_value(tw.level(3)) == Rational(8));
  CHECK_THROWS_AS(tw.level(0), std::out_of_range);
  CHECK_THROWS_AS(tw.level(4), std::out_of_range);

  CHECK_THROWS_AS(build_gamma_tower(cube.walsh(0b11), Rational(1), 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_gamma_tower(ou.monomial({2}, Rational(1)), Rational(2), 2),
                  std::invalid_argument);

  // Charlier towers exist while the valid range lasts; a too-small lattice refuses.
  const PoissonModel poisson(Rational(1));
  REQUIRE(poisson.truncation() == 28);
  CHECK_NOTHROW(build_gamma_tower(poisson.charlier(2), Rational(2), 3));
  const PoissonModel tiny(Rational(1), 2);
  CHECK_NOTHROW(build_gamma_tower(tiny.charlier(1), Rational(1), 1));
  CHECK_THROWS_AS(build_gamma_tower(tiny.charlier(1), Rational(1), 2),
                  std::invalid_argument);
}

TEST_CASE("Q forms, chaos detection and honest failures") {
  const Spectrum s = Spectrum::naturals();

  // OU x1 x2: Q_2(Gamma) = 2 constant, Q_3(Gamma) = 0
  const OuModel ou(2);
  const PolyFunction f = ou.coordinate(1) * ou.coordinate(2);
  const GammaTower<PolyFunction> tower = build_gamma_tower(f, Rational(2), 3);
  CHECK(constant_value(q_of_gamma(s, tower, 2)) == Rational(2));
  CHECK(is_zero(q_of_gamma(s, tower, 3)));
  CHECK(is_zero(q_of_gamma_raw(s, f, 3)));
  CHECK(is_chaos(s, f, 2, ctx("ou", 2, 2)).pass);
  CHECK(is_chaos(s, tower, 2, ctx("ou", 2, 2)).pass);

  // top-level cube chaos: the full product x1 x2
  const CubeModel cube(2);
  CHECK(is_chaos(s, cube.walsh(0b11), 2, ctx("cube", 2, 2)).pass);

  // random chaos on every model size in reach
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const CubeModel c5(5);
    CHECK(is_chaos(s, cube_chaos(c5, 2, seed).function, 2, ctx("cube", 5, 2, seed)).pass);
    CHECK(is_chaos(s, cube_chaos(c5, 3, seed).function, 3, ctx("cube", 5, 3, seed)).pass);
    CHECK(is_chaos(s, ou_chaos(ou, 2, seed).function, 2, ctx("ou", 2, 2, seed)).pass);
    CHECK(is_chaos(s, ou_chaos(ou, 4, seed).function, 4, ctx("ou", 2, 4, seed)).pass);
  }

  // an eigenfunction that is not a chaos: x^2 - 1 declared as degree-1
  const OuModel ou1(1);
  const PolyFunction h2 = ou1.monomial({2}, Rational(1)) - ou1.constant(Rational(1));
  CHECK_FALSE(is_chaos(s, h2, 1, ctx("ou", 1, 1)).pass);

  // Charlier eigenfunctions are not chaos: Q_2(Gamma)(c_1) = (1-j)/4 at theta = 1
  const PoissonModel poisson(Rational(1));
  const PoissonFunction c1 = poisson.charlier(1);
  const PoissonFunction q2 = q_of_gamma_raw(s, c1, 2);
  REQUIRE(q2.valid_upto() >= 20);
  for (int j = 0; j <= q2.valid_upto(); ++j) CHECK(q2[j] == Rational(1 - j, 4));
  const VerificationReport chaos_c1 = is_chaos(s, c1, 1, ctx("poisson", 1, 1));
  CHECK_FALSE(chaos_c1.pass);
  CHECK_FALSE(chaos_c1.skipped);

  // no assertable range left on a tiny lattice: the check skips instead of guessing
  const PoissonModel tiny(Rational(1), 2);
  const VerificationReport skipped = is_chaos(s, tiny.charlier(1), 1, ctx("poisson", 1, 1));
  CHECK(skipped.skipped);
  CHECK(skipped.pass);
}

TEST_CASE("q derivative link and q mean") {
  const Spectrum s = Spectrum::naturals();

  const OuModel ou(2);
  const PolyFunction f = ou.coordinate(1) * ou.coordinate(2);
  const GammaTower<PolyFunction> tower = build_gamma_tower(f, Rational(2), 3);
  CHECK(verify_q_derivative_link(s, tower, 2, ctx("ou", 2, 2)).pass);
  const VerificationReport mean = verify_q_mean(s, tower, 2, ctx("ou", 2, 2));
  CHECK(mean.pass);
  CHECK(mean.lhs == Rational(2));
  CHECK(mean.rhs == Rational(2));

  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const CubeModel c6(6);
    const Chaos<CubeFunction> chaos = cube_chaos(c6, 3, seed);
    const GammaTower<CubeFunction> t = build_gamma_tower(chaos.function, Rational(3), 4);
    CHECK(verify_q_derivative_link(s, t, 3, ctx("cube", 6, 3, seed)).pass);
    const VerificationReport m = verify_q_mean(s, t, 3, ctx("cube", 6, 3, seed));
    CHECK(m.pass);
    // Q_3(3) = 6
    CHECK(m.rhs == Rational(6) * chaos.norm2);
  }

  // truncated lattice: the mean check reports a boundary skip
  const PoissonModel poisson(Rational(1));
  const GammaTower<PoissonFunction> pt =
      build_gamma_tower(poisson.charlier(2), Rational(2), 2);
  const VerificationReport pm = verify_q_mean(s, pt, 2, ctx("poisson", 1, 2));
  CHECK(pm.skipped);
  CHECK(pm.pass);
}

TEST_CASE("integral shift identities") {
  const Spectrum s = Spectrum::naturals();

  // frozen instance: OU x1 x2, n = m = 1: both sides are 8
  const OuModel ou(2);
  const PolyFunction f = ou.coordinate(1) * ou.coordinate(2);
  const GammaTower<PolyFunction> tower = build_gamma_tower(f, Rational(2), 4);
  const VerificationReport base = verify_integral_shift(tower, 1, 1, ctx("ou", 2, 2));
  CHECK(base.pass);
  CHECK(base.lhs == Rational(8));
  CHECK(base.rhs == Rational(8));

  for (int n = 1; n <= 3; ++n)
    for (int m = 1; n + m <= 4; ++m)
      CHECK(verify_integral_shift(tower, n, m, ctx("ou", 2, 2)).pass);

  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const CubeModel c6(6);
    const GammaTower<CubeFunction> t =
        build_gamma_tower(cube_chaos(c6, 2, seed).function, Rational(2), 5);
    for (int n = 1; n <= 4; ++n)
      for (int m = 1; n + m <= 5; ++m) {
        const VerificationReport r = verify_integral_shift(t, n, m, ctx("cube", 6, 2, seed));
        CHECK(r.pass);
        CHECK_FALSE(r.skipped);
        CHECK(r.residual == Rational(0));
      }
  }

  CHECK_THROWS_AS(verify_integral_shift(tower, 0, 1, ctx("ou", 2, 2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(verify_integral_shift(tower, 1, 4, ctx("ou", 2, 2)),
                  std::invalid_argument);

  const PoissonModel poisson(Rational(1));
  const GammaTower<PoissonFunction> pt =
      build_gamma_tower(poisson.charlier(2), Rational(2), 2);
  const VerificationReport pr = verify_integral_shift(pt, 1, 1, ctx("poisson", 1, 2));
  CHECK(pr.skipped);
  CHECK(pr.pass);
}

TEST_CASE("variance identity matches the section-5 reductions") {
  const Spectrum s = Spectrum::naturals();
  const OuModel ou(1);

  // k = 1: int Gamma^2 = lambda_1 int F^2 Gamma, both sides 1 for F = x
  const PolyFunction x = ou.coordinate(1);
  const GammaTower<PolyFunction> tx = build_gamma_tower(x, Rational(1), 2);
  const VerificationReport r1 = verify_variance_identity(s, tx, 1, ctx("ou", 1, 1));
  CHECK(r1.pass);
  CHECK(r1.lhs == Rational(1));
  CHECK(r1.rhs == Rational(1));

  // k = 2, F = x^2 - 1: frozen moments int Gamma^2 = 48, int F^2 Gamma = 40,
  // int Gamma (1/2)L Gamma = -32
  const PolyFunction h2 = ou.monomial({2}, Rational(1)) - ou.constant(Rational(1));
  const GammaTower<PolyFunction> th = build_gamma_tower(h2, Rational(2), 2);
  const PolyFunction gamma = th.level(1);
  CHECK(integrate(gamma * gamma) == Rational(48));
  CHECK(integrate(h2 * h2 * gamma) == Rational(40));
  const PolyFunction half_l_gamma = Rational(1, 2) * apply_generator(gamma);
  CHECK(integrate(gamma * half_l_gamma) == Rational(-32));
  // reduction: (1/2) int Gamma L Gamma - lambda_1 int Gamma^2 + lambda_1 lambda_2
  // int F^2 Gamma = 0
  CHECK(Rational(-32) - Rational(48) + Rational(2) * Rational(40) == Rational(0));
  const VerificationReport r2 = verify_variance_identity(s, th, 2, ctx("ou", 1, 2));
  CHECK(r2.pass);
  CHECK(r2.lhs == Rational(48));
  CHECK(r2.rhs == Rational(48));

  // cube x1 x2: both sides 4
  const CubeModel cube(2);
  const GammaTower<CubeFunction> tw = build_gamma_tower(cube.walsh(0b11), Rational(2), 2);
  const VerificationReport rc = verify_variance_identity(s, tw, 2, ctx("cube", 2, 2));
  CHECK(rc.pass);
  CHECK(rc.lhs == Rational(4));

  // random chaos across models and degrees
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const CubeModel c6(6);
    for (int k = 1; k <= 4; ++k) {
      const GammaTower<CubeFunction> t =
          build_gamma_tower(cube_chaos(c6, k, seed).function, Rational(k), 2);
      CHECK(verify_variance_identity(s, t, k, ctx("cube", 6, k, seed)).pass);
    }
    const OuModel o2(2);
    for (int k = 1; k <= 3; ++k) {
      const GammaTower<PolyFunction> t =
          build_gamma_tower(ou_chaos(o2, k, seed).function, Rational(k), 2);
      CHECK(verify_variance_identity(s, t, k, ctx("ou", 2, k, seed)).pass);
    }
  }
}

TEST_CASE("variance bound in homogeneous form") {
  const Spectrum s = Spectrum::naturals();
  const OuModel ou(1);

  // F = x: Var(Gamma) = 0 and the bound is an equality
  const GammaTower<PolyFunction> tx = build_gamma_tower(ou.coordinate(1), Rational(1), 1);
  const VerificationReport rx = verify_variance_bound(s, tx, 1, ctx("ou", 1, 1));
  CHECK(rx.pass);
  CHECK(rx.lhs == Rational(0));
  CHECK(rx.rhs == Rational(0));

  // F = x^2 - 1 with c = 2: Var(Gamma) = 32 against the bound 64; dividing by c^2
  // gives the normalized pair 8 <= 16
  const PolyFunction h2 = ou.monomial({2}, Rational(1)) - ou.constant(Rational(1));
  const GammaTower<PolyFunction> th = build_gamma_tower(h2, Rational(2), 1);
  const VerificationReport rh = verify_variance_bound(s, th, 2, ctx("ou", 1, 2));
  CHECK(rh.pass);
  CHECK(rh.lhs == Rational(32));
  CHECK(rh.rhs == Rational(64));
  CHECK(rh.residual == Rational(32));
  CHECK(rh.lhs / Rational(4) == Rational(8));
  CHECK(rh.rhs / Rational(4) == Rational(16));

  // OU x1 x2 normalized: Var(Gamma) = 4 against 8
  const OuModel ou2(2);
  const PolyFunction f12 = ou2.coordinate(1) * ou2.coordinate(2);
  const GammaTower<PolyFunction> tf = build_gamma_tower(f12, Rational(2), 1);
  const VerificationReport rf = verify_variance_bound(s, tf, 2, ctx("ou", 2, 2));
  CHECK(rf.pass);
  CHECK(rf.lhs == Rational(4));
  CHECK(rf.rhs == Rational(8));

  // cube x1 x2: equality at zero, a non-Gaussian function with constant Gamma
  const CubeModel cube(2);
  const GammaTower<CubeFunction> tw = build_gamma_tower(cube.walsh(0b11), Rational(2), 1);
  const VerificationReport rc = verify_variance_bound(s, tw, 2, ctx("cube", 2, 2));
  CHECK(rc.pass);
  CHECK(rc.lhs == Rational(0));
  CHECK(rc.rhs == Rational(0));

  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const CubeModel c6(6);
    for (int k = 1; k <= 4; ++k) {
      const GammaTower<CubeFunction> t =
          build_gamma_tower(cube_chaos(c6, k, seed).function, Rational(k), 1);
      CHECK(verify_variance_bound(s, t, k, ctx("cube", 6, k, seed)).pass);
    }
  }

  // an explicit spectrum with a large relative gap fails the degree-3 sign condition
  const Spectrum gap = Spectrum::from_list(
      {Rational(0), Rational(1, 2), Rational(1), Rational(3)});
  CHECK_FALSE(check_spectral_condition(gap, 3, 3).holds);
  const CubeModel c4(4);
  const GammaTower<CubeFunction> t3 =
      build_gamma_tower(cube_chaos(c4, 3, 0).function, Rational(3), 1);
  CHECK_THROWS_AS(verify_variance_bound(gap, t3, 3, ctx("cube", 4, 3)),
                  std::invalid_argument);
}

TEST_CASE("fourth moment diffusion form") {
  const OuModel ou(1);
  const PolyFunction h2 = ou.monomial({2}, Rational(1)) - ou.constant(Rational(1));
  const GammaTower<PolyFunction> th = build_gamma_tower(h2, Rational(2), 1);

  // frozen moments: int F^4 = 60, diffusion identity 2*60 = 3*40
  CHECK(integrate(h2 * h2 * h2 * h2) == Rational(60));
  const VerificationReport r = fourth_moment_form(th, 2, ctx("ou", 1, 2));
  CHECK(r.pass);
  CHECK(r.lhs == Rational(32));
  CHECK(r.rhs == Rational(64));

  // the slack agrees with the variance bound route (the two bounds share it)
  const Spectrum s = Spectrum::naturals();
  CHECK(r.residual == verify_variance_bound(s, th, 2, ctx("ou", 1, 2)).residual);

  const GammaTower<PolyFunction> tx = build_gamma_tower(ou.coordinate(1), Rational(1), 1);
  const VerificationReport rx = fourth_moment_form(tx, 1, ctx("ou", 1, 1));
  CHECK(rx.pass);
  CHECK(rx.lhs == Rational(0));
  CHECK(rx.rhs == Rational(0));

  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const OuModel o2(2);
    for (int k = 1; k <= 3; ++k) {
      const GammaTower<PolyFunction> t =
          build_gamma_tower(ou_chaos(o2, k, seed).function, Rational(k), 1);
      CHECK(fourth_moment_form(t, k, ctx("ou", 2, k, seed)).pass);
    }
  }

  const CubeModel cube(2);
  const GammaTower<CubeFunction> tw = build_gamma_tower(cube.walsh(0b11), Rational(2), 1);
  CHECK_THROWS_WITH_AS(fourth_moment_form(tw, 2, ctx("cube", 2, 2)),
                       "gamma: diffusion identity unavailable on cube",
                       std::invalid_argument);
}

TEST_CASE("cube difference-form route to the Q form") {
  const Spectrum s = Spectrum::naturals();
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const CubeModel model(5);
    for (int k = 1; k <= 3; ++k) {
      const CubeFunction F = cube_chaos(model, k, seed).function;
      CHECK(is_zero(q_of_gamma_raw(s, F, k) - cube_iterated_difference_form(F, k)));
    }
    // the identity is combinatorial: it holds for arbitrary functions too
    const CubeFunction g = random_cube_function(model, seed);
    for (int k = 1; k <= 4; ++k)
      CHECK(is_zero(q_of_gamma_raw(s, g, k) - cube_iterated_difference_form(g, k)));
  }

  // beyond the dimension every k-fold distinct difference dies
  const CubeModel m2(2);
  const CubeFunction g2 = random_cube_function(m2, 7);
  CHECK(is_zero(cube_iterated_difference_form(g2, 3)));
  CHECK(is_zero(q_of_gamma_raw(s, g2, 3)));

  CHECK_THROWS_AS(cube_iterated_difference_form(g2, 0), std::invalid_argument);
}

TEST_CASE("spectral positivity matrix oracle") {
  const CubeModel model(4);

  // P = X^2 is nonnegative over the whole spectrum
  const RationalPoly sq = RationalPoly::monomial(Rational(1), 2);
  const SpectralPositivityCheck ok = check_spectral_positivity(model, sq, 20, 1);
  CHECK(ok.predicted_nonneg);
  CHECK(ok.routes_agree);
  CHECK(ok.equivalence_confirmed);
  CHECK(ok.min_form_value.sign() >= 0);

  // P = X is negative from level 1 on; the Walsh witness certifies it
  const RationalPoly lin = RationalPoly::monomial(Rational(1), 1);
  const SpectralPositivityCheck bad = check_spectral_positivity(model, lin, 20, 2);
  CHECK_FALSE(bad.predicted_nonneg);
  CHECK(bad.routes_agree);
  CHECK(bad.witness_found);
  CHECK(bad.equivalence_confirmed);
  CHECK(bad.min_form_value < Rational(0));

  // P = X + 2 first fails at level 3
  const RationalPoly shifted =
      RationalPoly::monomial(Rational(1), 1) + RationalPoly::constant(Rational(2));
  const SpectralPositivityCheck mid = check_spectral_positivity(model, shifted, 20, 3);
  CHECK_FALSE(mid.predicted_nonneg);
  CHECK(mid.p_at_eigenvalues[2] == Rational(0));
  CHECK(mid.p_at_eigenvalues[3] == Rational(-1));
  CHECK(mid.witness_found);
  CHECK(mid.equivalence_confirmed);

  // random degree <= 4 polynomials all confirm the equivalence
  std::mt19937_64 rng = make_engine(11, 0x706fULL);
  for (int t = 0; t < 10; ++t) {
    std::vector<Rational> coeffs;
    for (int i = 0; i <= 4; ++i) {
      const long num = static_cast<long>(rng() % 9) - 4;
      const long den = static_cast<long>(rng() % 2) + 1;
      coeffs.emplace_back(num, den);
    }
    const RationalPoly p(std::move(coeffs));
    const SpectralPositivityCheck c =
        check_spectral_positivity(model, p, 10, 100 + static_cast<std::uint64_t>(t));
    CHECK(c.routes_agree);
    CHECK(c.equivalence_confirmed);
  }
}

TEST_CASE("near chaos probe records a counterexample for non-eigenfunctions") {
  const Spectrum s = Spectrum::naturals();
  const CubeModel model(5);

  // an exact chaos: sign condition and bound both hold with the Q form at zero
  const CubeFunction pure = cube_chaos(model, 2, 3).function;
  const NearChaosProbe clean = near_chaos_probe(s, pure, 2);
  CHECK(clean.q_pointwise_min == Rational(0));
  CHECK(clean.sign_condition);
  CHECK(clean.bound_holds);
  CHECK(clean.implication_ok);

  // spreading mass over another level-2 character keeps everything tight
  const CubeFunction spread =
      model.walsh(0b00011) + Rational(1, 2) * model.walsh(0b11000);
  const NearChaosProbe tight = near_chaos_probe(s, spread, 2);
  CHECK(tight.q_pointwise_min == Rational(0));
  CHECK(tight.bound_lhs == Rational(25, 4));
  CHECK(tight.bound_rhs == Rational(25, 4));
  CHECK(tight.implication_ok);

  // mixing eigenspaces breaks the implication even though the sign condition
  // holds: the eigenfunction hypothesis is essential, not just Q >= 0
  const CubeFunction mixed =
      model.walsh(0b00011) + Rational(1, 3) * model.walsh(0b11111);
  const NearChaosProbe broken = near_chaos_probe(s, mixed, 2);
  CHECK(broken.q_pointwise_min == Rational(20, 3));
  CHECK(broken.sign_condition);
  CHECK(broken.bound_lhs == Rational(673, 81));
  CHECK(broken.bound_rhs == Rational(604, 81));
  CHECK_FALSE(broken.bound_holds);
  CHECK_FALSE(broken.implication_ok);
}

TEST_CASE("curvature checks") {
  const OuModel ou(2);

  // linear eigenfunctions at rho = 1 have constant Gamma
  const PolyFunction lin =
      ou.coordinate(1) + Rational(2) * ou.coordinate(2);
  const VerificationReport rl = check_curvature_rigidity(lin, Rational(1), ctx("ou", 2, 1));
  CHECK(rl.pass);
  CHECK(constant_value(carre_du_champ(lin, lin)) == Rational(5));

  // x^2 is not an eigenfunction; the identity still gives Gamma_2 - Gamma = 4
  const OuModel ou1(1);
  const PolyFunction x2 = ou1.monomial({2}, Rational(1));
  const VerificationReport rx = check_curvature_rigidity(x2, Rational(1), ctx("ou", 1, 0));
  CHECK(rx.pass);
  CHECK(constant_value(iterated_gradient(x2, x2, 2) - carre_du_champ(x2, x2)) ==
        Rational(4));

  // rho beyond 1 loses the sum-of-squares certificate
  const VerificationReport rbad =
      check_curvature_rigidity(x2, Rational(3, 2), ctx("ou", 1, 0));
  CHECK_FALSE(rbad.pass);

  // cube: levels k give Gamma_2 - Gamma = k^2 - k >= 0 on characters
  const CubeModel cube(3);
  const VerificationReport rw =
      check_curvature_pointwise(cube.walsh(0b011), Rational(1), ctx("cube", 3, 2));
  CHECK(rw.pass);
  CHECK(rw.lhs == Rational(2));

  // random functions: outcome recorded, structure checked, sign not asserted
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const CubeFunction f = random_cube_function(cube, seed);
    const VerificationReport rr = check_curvature_pointwise(f, Rational(1), ctx("cube", 3, 0, seed));
    CHECK(rr.residual == rr.lhs);
    CHECK(rr.pass == (rr.lhs.sign() >= 0));
  }
}

TEST_CASE("verification report CSV round trip") {
  CHECK(verification_csv_header() == "identity,model,N,k,seed,lhs,rhs,residual,pass");

  const OuModel ou(2);
  const PolyFunction f = ou.coordinate(1) * ou.coordinate(2);
  const GammaTower<PolyFunction> tower = build_gamma_tower(f, Rational(2), 4);
  const VerificationReport r = verify_integral_shift(tower, 1, 1, ctx("ou", 2, 2, 42));
  CHECK(verification_csv_row(r) == "gamma-shift-n1-m1,ou,2,2,42,8,8,0,1");

  const PoissonModel poisson(Rational(1));
  const GammaTower<PoissonFunction> pt =
      build_gamma_tower(poisson.charlier(2), Rational(2), 2);
  const VerificationReport pr = verify_integral_shift(pt, 1, 1, ctx("poisson", 1, 2, 7));
  const std::string row = verification_csv_row(pr);
  CHECK(row.find("gamma-shift-n1-m1[boundary-skip],poisson,1,2,7,") == 0);
  CHECK(row.back() == '1');
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "chaoslab/chaos_spec.hpp"
#include "chaoslab/stein.hpp"

using namespace chaoslab;

namespace {

ReportContext ctx(std::string_view model, int dim, int degree, std::uint64_t seed = 0) {
  return ReportContext{std::string(model), dim, degree, seed};
}

/// F = (1/sqrt(m)) sum_{i<=m} x_{2i-1} x_{2i} for perfect-square m, so the scale is an
/// exact rational and int F^2 = 1.
PolyFunction paired_product(const OuModel& model, int m) {
  const int root = int(std::lround(std::sqrt(double(m))));
  REQUIRE(root * root == m);
  REQUIRE(model.dimension() == 2 * m);
  PolyFunction f(model.dimension());
  for (int i = 1; i <= m; ++i) {
    Exponents e(std::size_t(model.dimension()), 0);
    e[std::size_t(2 * i - 2)] = 1;
    e[std::size_t(2 * i - 1)] = 1;
    f.add_term(e, Rational(1, root));
  }
  return f;
}

/// F = sum_{i<=d} (x_i^2 - 1), a degree-2 eigenfunction with int F^2 = 2d.
PolyFunction coordinate_square_sum(const OuModel& model, int d) {
  PolyFunction f(model.dimension());
  for (int i = 1; i <= d; ++i) {
    Exponents e(std::size_t(model.dimension()), 0);
    e[std::size_t(i - 1)] = 2;
    f.add_term(e, Rational(1));
  }
  f.add_term(Exponents(std::size_t(model.dimension()), 0), Rational(-d));
  return f;
}

Chaos<CubeFunction> cube_chaos(int n, int k, std::uint64_t seed) {
  return materialize_chaos(random_chaos(ModelTag::cube, n, k, seed), CubeModel(n));
}

Chaos<PolyFunction> ou_chaos(int n, int k, std::uint64_t seed) {
  return materialize_chaos(random_chaos(ModelTag::ou, n, k, seed), OuModel(n));
}

}  // namespace

TEST_CASE("normal bound exact fixtures") {
  const OuModel line(1);
  const SteinNormalBound trivial = normal_bound(line.coordinate(1), Rational(1));
  CHECK(trivial.variance_term == Rational(0));
  CHECK(trivial.kolmogorov == 0.0);
  CHECK(trivial.total_variation == 0.0);

  PolyFunction h2(1);
  h2.add_term({2}, Rational(1));
  h2.add_term({0}, Rational(-1));
  const SteinNormalBound unnormalized = normal_bound(h2, Rational(2));
  CHECK(unnormalized.variance_term == Rational(32));
  CHECK(unnormalized.kolmogorov == doctest::Approx(std::sqrt(32.0) / 2.0));

  for (int m : {4, 16, 64, 256}) {
    const OuModel model(2 * m);
    const PolyFunction f = paired_product(model, m);
    REQUIRE(integrate(f * f) == Rational(1));
    const SteinNormalBound b = normal_bound(f, Rational(2));
    CHECK(b.variance_term == Rational(4, m));
    CHECK(b.kolmogorov == doctest::Approx(1.0 / std::sqrt(double(m))));
    CHECK(b.total_variation == doctest::Approx(2.0 * b.kolmogorov));
  }

  const CubeModel cube(2);
  const SteinNormalBound flat = normal_bound(cube.walsh(0b11), Rational(2));
  CHECK(flat.variance_term == Rational(0));

  const OuModel plane(2);
  const PolyFunction bad = plane.coordinate(1) +
                           plane.coordinate(1) * plane.coordinate(2);
  CHECK_THROWS_AS(normal_bound(bad, Rational(1)), std::invalid_argument);
  CHECK_THROWS_AS(normal_bound(line.coordinate(1), Rational(0)), std::invalid_argument);
}

TEST_CASE("gamma bound exact fixtures") {
  const OuModel line(1);
  PolyFunction f(1);
  f.add_term({2}, Rational(1, 2));
  f.add_term({0}, Rational(-1, 2));
  REQUIRE(integrate(f * f) == Rational(1, 2));
  const SteinGammaBound exact = gamma_bound(f, Rational(2), Rational(1, 2));
  CHECK(exact.discrepancy == Rational(0));
  CHECK(exact.kolmogorov == 0.0);
  const PolyFunction centered = carre_du_champ(f, f) - Rational(2) * f;
  CHECK(exact.discrepancy == function_variance(centered));

  const SteinGammaBound coord = gamma_bound(line.coordinate(1), Rational(1), Rational(1));
  CHECK(coord.discrepancy == Rational(1));
  CHECK(coord.kolmogorov == doctest::Approx(1.0));

  const CubeModel cube(2);
  const SteinGammaBound pair = gamma_bound(cube.walsh(0b11), Rational(2), Rational(1));
  CHECK(pair.discrepancy == Rational(4));

  CHECK_THROWS_AS(gamma_bound(f, Rational(2), Rational(0)), std::invalid_argument);
  CHECK_THROWS_AS(gamma_bound(f, Rational(2), Rational(-1)), std::invalid_argument);
}

TEST_CASE("gamma target variance bound") {
  const Spectrum naturals = Spectrum::naturals();

  PolyFunction half_h2(1);
  half_h2.add_term({2}, Rational(1, 2));
  half_h2.add_term({0}, Rational(-1, 2));
  const VerificationReport tight = verify_gamma_target_bound(
      naturals, half_h2, 2, Rational(1, 2), ctx("ou", 1, 2));
  CHECK(tight.pass);
  CHECK_FALSE(tight.skipped);
  CHECK(tight.lhs == Rational(0));
  CHECK(tight.rhs == Rational(0));

  const CubeModel cube(2);
  const VerificationReport cube_pair = verify_gamma_target_bound(
      naturals, cube.walsh(0b11), 2, Rational(1), ctx("cube", 2, 2));
  CHECK(cube_pair.pass);
  CHECK(cube_pair.lhs == Rational(4));
  CHECK(cube_pair.rhs == Rational(8));

  const OuModel plane(2);
  const PolyFunction cross = plane.coordinate(1) * plane.coordinate(2);
  const VerificationReport ou_pair = verify_gamma_target_bound(
      naturals, cross, 2, Rational(1), ctx("ou", 2, 2));
  CHECK(ou_pair.lhs == Rational(8));
  CHECK(ou_pair.rhs == Rational(16));

  PolyFunction h2(1);
  h2.add_term({2}, Rational(1));
  h2.add_term({0}, Rational(-1));
  const VerificationReport wide = verify_gamma_target_bound(
      naturals, h2, 2, Rational(2), ctx("ou", 1, 2));
  CHECK(wide.lhs == Rational(8));
  CHECK(wide.rhs == Rational(16));

  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    for (int k = 1; k <= 4; ++k) {
      const Chaos<CubeFunction> c = cube_chaos(6, k, seed);
      const VerificationReport r = verify_gamma_target_bound(
          naturals, c.function, k, c.norm2, ctx("cube", 6, k, seed));
      CHECK(r.pass);
      CHECK_FALSE(r.skipped);
      CHECK(r.lhs.sign() >= 0);
    }
    for (int k = 1; k <= 3; ++k) {
      const Chaos<PolyFunction> c = ou_chaos(3, k, seed);
      const VerificationReport r = verify_gamma_target_bound(
          naturals, c.function, k, c.norm2, ctx("ou", 3, k, seed));
      CHECK(r.pass);
      CHECK_FALSE(r.skipped);
    }
  }

  CHECK_THROWS_AS(verify_gamma_target_bound(naturals, cross, 2, Rational(2),
                                            ctx("ou", 2, 2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(verify_gamma_target_bound(naturals, h2, 1, Rational(2),
                                            ctx("ou", 1, 1)),
                  std::invalid_argument);

  const PoissonModel poisson(Rational(1));
  CHECK_THROWS_AS(verify_gamma_target_bound(naturals, poisson.charlier(1), 1, Rational(1),
                                            ctx("poisson", 1, 1)),
                  std::invalid_argument);

  const Spectrum gap = Spectrum::from_list(
      {Rational(0), Rational(1, 2), Rational(1), Rational(3)});
  const CubeModel three(3);
  CHECK_THROWS_AS(verify_gamma_target_bound(gap, three.walsh(0b111), 3, Rational(1),
                                            ctx("cube", 3, 3)),
                  std::invalid_argument);
}

TEST_CASE("gamma target fourth moment form") {
  PolyFunction h2(1);
  h2.add_term({2}, Rational(1));
  h2.add_term({0}, Rational(-1));
  const VerificationReport r = verify_gamma_target_fourth_moment(
      h2, 2, Rational(2), ctx("ou", 1, 2));
  CHECK(r.pass);
  CHECK(r.lhs == Rational(6));
  CHECK(r.rhs == Rational(12));
  CHECK(r.residual == Rational(6));

  PolyFunction half_h2(1);
  half_h2.add_term({2}, Rational(1, 2));
  half_h2.add_term({0}, Rational(-1, 2));
  const VerificationReport tight = verify_gamma_target_fourth_moment(
      half_h2, 2, Rational(1, 2), ctx("ou", 1, 2));
  CHECK(tight.pass);
  CHECK(tight.lhs == Rational(0));
  CHECK(tight.rhs == Rational(0));

  for (int d = 1; d <= 5; ++d) {
    const OuModel model(d);
    const PolyFunction f = coordinate_square_sum(model, d);
    REQUIRE(integrate(f * f) == Rational(2 * d));
    const VerificationReport sum = verify_gamma_target_fourth_moment(
        f, 2, Rational(2 * d), ctx("ou", d, 2));
    CHECK(sum.pass);
    CHECK(sum.lhs == Rational(6 * d));
    CHECK(sum.rhs == Rational(12 * d));
  }

  CHECK_THROWS_AS(verify_gamma_target_fourth_moment(h2, 3, Rational(2), ctx("ou", 1, 3)),
                  std::invalid_argument);
  CHECK_THROWS_AS(verify_gamma_target_fourth_moment(h2, 2, Rational(1), ctx("ou", 1, 2)),
                  std::invalid_argument);
  const CubeModel cube(2);
  CHECK_THROWS_AS(verify_gamma_target_fourth_moment(cube.walsh(0b11), 2, Rational(1),
                                                    ctx("cube", 2, 2)),
                  std::invalid_argument);
}

TEST_CASE("target cdf evaluation") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(normal_cdf(1.96) == doctest::Approx(0.975002).epsilon(1e-5));
  CHECK(normal_cdf(-1.0) + normal_cdf(1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(gamma_cdf(0.5, 1.0) == doctest::Approx(std::erf(1.0)).epsilon(1e-12));
  CHECK(gamma_cdf(1.0, 2.0) == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-12));
  CHECK(gamma_cdf(2.0, 0.0) == 0.0);
  CHECK(gamma_cdf(2.0, -1.0) == 0.0);
  CHECK_THROWS_AS(gamma_cdf(-1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(DistanceTarget::gamma(Rational(0)), std::invalid_argument);
  CHECK(DistanceTarget::normal().label() == "normal");
  CHECK(DistanceTarget::gamma(Rational(1, 2)).label() == "gamma(1/2)");
}

TEST_CASE("exact enumeration distance on the cube") {
  const double phi1_gap = normal_cdf(1.0) - 0.5;

  const CubeModel line(1);
  const EmpiricalDistance two_atom = estimate_distance(
      line, line.coordinate(1), DistanceTarget::normal(), DistanceMethod::exact_enumeration);
  CHECK(two_atom.method == "exact");
  CHECK(two_atom.error_proxy == 0.0);
  CHECK(two_atom.estimate == doctest::Approx(phi1_gap).epsilon(1e-12));
  CHECK(two_atom.estimate == doctest::Approx(0.34134474606854293).epsilon(1e-10));

  const CubeModel three(3);
  const EmpiricalDistance top = estimate_distance(
      three, three.walsh(0b111), DistanceTarget::normal(), DistanceMethod::exact_enumeration);
  CHECK(top.estimate == doctest::Approx(phi1_gap).epsilon(1e-12));

  const CubeModel four(4);
  const Chaos<CubeFunction> spread = cube_chaos(4, 2, 17);
  const EmpiricalDistance generic = estimate_distance(
      four, spread.function, DistanceTarget::normal(), DistanceMethod::exact_enumeration);
  CHECK(generic.estimate > 0.0);
  CHECK(generic.estimate < 1.0);
}

TEST_CASE("monte carlo distance paths") {
  const OuModel line(1);
  const EmpiricalDistance pure_noise = estimate_distance(
      line, line.coordinate(1), DistanceTarget::normal(), 100000, 42);
  CHECK(pure_noise.method == "mc");
  CHECK(pure_noise.estimate < 0.01);
  CHECK(pure_noise.error_proxy ==
        doctest::Approx(std::sqrt(std::log(40.0) / 200000.0)).epsilon(1e-12));

  PolyFunction half_h2(1);
  half_h2.add_term({2}, Rational(1, 2));
  half_h2.add_term({0}, Rational(-1, 2));
  const EmpiricalDistance exact_gamma_small = estimate_distance(
      line, half_h2, DistanceTarget::gamma(Rational(1, 2)), 10000, 7);
  const EmpiricalDistance exact_gamma_large = estimate_distance(
      line, half_h2, DistanceTarget::gamma(Rational(1, 2)), 100000, 7);
  CHECK(exact_gamma_small.estimate < 0.03);
  CHECK(exact_gamma_large.estimate < 0.012);
  CHECK(exact_gamma_large.estimate < exact_gamma_small.estimate);
  CHECK(exact_gamma_large.target == "gamma(1/2)");

  const OuModel model32(32);
  const PolyFunction pairs16 = paired_product(model32, 16);
  const SteinNormalBound bound16 = normal_bound(pairs16, Rational(2));
  const EmpiricalDistance dist16 = estimate_distance(
      model32, pairs16, DistanceTarget::normal(), 100000, 13);
  CHECK(dist16.estimate <= bound16.kolmogorov + 3.0 * dist16.error_proxy);

  const CubeModel three(3);
  const EmpiricalDistance cube_mc = estimate_distance(
      three, three.walsh(0b111), DistanceTarget::normal(), DistanceMethod::monte_carlo,
      50000, 5);
  CHECK(cube_mc.estimate ==
        doctest::Approx(normal_cdf(1.0) - 0.5).epsilon(0.05));

  const PoissonModel poisson(Rational(1));
  const EmpiricalDistance lattice = estimate_distance(
      poisson, poisson.charlier(1), DistanceTarget::normal(), 20000, 3);
  CHECK(lattice.estimate > 0.1);
  CHECK(lattice.rejected == 0);

  CHECK_THROWS_AS(estimate_distance(line, line.coordinate(1), DistanceTarget::normal(),
                                    0, 1),
                  std::invalid_argument);
}

TEST_CASE("scaling contract for the normal bound") {
  const Chaos<PolyFunction> c = ou_chaos(3, 2, 9);
  const Rational scale(3, 2);
  const SteinNormalBound base = normal_bound(c.function, Rational(2));
  const SteinNormalBound scaled = normal_bound(scale * c.function, Rational(2));
  CHECK(scaled.variance_term ==
        scale * scale * scale * scale * base.variance_term);
  CHECK(scaled.kolmogorov ==
        doctest::Approx(scale.to_double() * scale.to_double() * base.kolmogorov));
  CHECK(scaled.eigenvalue == base.eigenvalue);
}

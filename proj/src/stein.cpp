#include "chaoslab/stein.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace chaoslab {

std::string DistanceTarget::label() const {
  if (kind == Kind::normal) return "normal";
  std::ostringstream os;
  os << "gamma(" << shape << ")";
  return os.str();
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double gamma_cdf(double shape, double x) {
  if (!(shape > 0.0)) throw std::invalid_argument("stein: gamma shape must be positive");
  if (x <= 0.0) return 0.0;
  return boost::math::gamma_p(shape, x);
}

double target_cdf(const DistanceTarget& target, double x) {
  if (target.kind == DistanceTarget::Kind::normal) return normal_cdf(x);
  return gamma_cdf(target.shape.to_double(), x);
}

namespace {

constexpr double kProxyDelta = 0.05;

double mc_error_proxy(std::size_t n) {
  return std::sqrt(std::log(2.0 / kProxyDelta) / (2.0 * double(n)));
}

double target_shift(const DistanceTarget& target) {
  return target.kind == DistanceTarget::Kind::gamma ? target.shape.to_double() : 0.0;
}

void require_scale(double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("stein: scale must be positive");
}

}  // namespace

EmpiricalDistance atom_distance(const std::vector<std::pair<Rational, Rational>>& atoms,
                                double scale, const DistanceTarget& target) {
  require_scale(scale);
  const double shift = target_shift(target);
  double d = 0.0;
  Rational cum(0);
  for (const auto& [value, mass] : atoms) {
    const double g = target_cdf(target, value.to_double() * scale + shift);
    const double before = cum.to_double();
    cum += mass;
    d = std::max(d, std::max(g - before, cum.to_double() - g));
  }
  EmpiricalDistance e;
  e.target = target.label();
  e.method = "exact";
  e.estimate = d;
  return e;
}

EmpiricalDistance sample_distance(SampleResult samples, double scale,
                                  const DistanceTarget& target, std::uint64_t seed) {
  require_scale(scale);
  if (samples.values.empty())
    throw std::invalid_argument("stein: sample count must be positive");
  std::sort(samples.values.begin(), samples.values.end());
  const double shift = target_shift(target);
  const double n = double(samples.values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.values.size(); ++i) {
    const double g = target_cdf(target, samples.values[i] * scale + shift);
    d = std::max(d, std::max(g - double(i) / n, double(i + 1) / n - g));
  }
  EmpiricalDistance e;
  e.target = target.label();
  e.method = "mc";
  e.estimate = d;
  e.error_proxy = mc_error_proxy(samples.values.size());
  e.n_samples = samples.values.size();
  e.seed = seed;
  e.rejected = samples.rejected;
  return e;
}

EmpiricalDistance estimate_distance(const CubeModel& model, const CubeFunction& F,
                                    const DistanceTarget& target, DistanceMethod method,
                                    std::size_t n_samples, std::uint64_t seed) {
  if (method == DistanceMethod::monte_carlo) {
    if (n_samples == 0)
      throw std::invalid_argument("stein: sample count must be positive");
    return sample_distance(sample(model, F, n_samples, seed), 1.0, target, seed);
  }
  EmpiricalDistance e = atom_distance(atom_distribution(F), 1.0, target);
  e.n_samples = std::size_t(F.point_count());
  return e;
}

EmpiricalDistance estimate_distance(const OuModel& model, const PolyFunction& F,
                                    const DistanceTarget& target, std::size_t n_samples,
                                    std::uint64_t seed) {
  if (n_samples == 0) throw std::invalid_argument("stein: sample count must be positive");
  return sample_distance(sample(model, F, n_samples, seed), 1.0, target, seed);
}

EmpiricalDistance estimate_distance(const PoissonModel& model, const PoissonFunction& F,
                                    const DistanceTarget& target, std::size_t n_samples,
                                    std::uint64_t seed) {
  if (n_samples == 0) throw std::invalid_argument("stein: sample count must be positive");
  return sample_distance(sample(model, F, n_samples, seed), 1.0, target, seed);
}

}  // namespace chaoslab

#include "chaoslab/sampling.hpp"

#include <cmath>
#include <cstdlib>
#include <map>
#include <random>
#include <stdexcept>

#include "chaoslab/rng.hpp"

namespace chaoslab {

namespace {

double uniform01(std::mt19937_64& eng) { return double(eng() >> 11) * 0x1.0p-53; }

/// Marsaglia polar method; the spare is local to one chunk's engine.
struct NormalSource {
  std::mt19937_64 eng;
  double spare = 0.0;
  bool has_spare = false;

  explicit NormalSource(std::mt19937_64 e) : eng(std::move(e)) {}

  double next() {
    if (has_spare) {
      has_spare = false;
      return spare;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01(eng) - 1.0;
      v = 2.0 * uniform01(eng) - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(s) / s);
    spare = v * scale;
    has_spare = true;
    return u * scale;
  }
};

struct DoubleTerm {
  std::vector<std::pair<std::size_t, unsigned>> powers;  // nonzero exponents only
  double coeff;
};

std::vector<DoubleTerm> lower_terms(const PolyFunction& f) {
  std::vector<DoubleTerm> out;
  out.reserve(f.terms().size());
  for (const auto& [exps, coeff] : f.terms()) {
    DoubleTerm term{{}, coeff.to_double()};
    for (std::size_t i = 0; i < exps.size(); ++i)
      if (exps[i] > 0) term.powers.emplace_back(i, exps[i]);
    out.push_back(std::move(term));
  }
  return out;
}

double evaluate_terms(const std::vector<DoubleTerm>& terms, const std::vector<double>& x) {
  double sum = 0.0, comp = 0.0;
  for (const auto& term : terms) {
    double t = term.coeff;
    for (const auto& [i, e] : term.powers)
      for (unsigned rep = 0; rep < e; ++rep) t *= x[i];
    const double y = sum + t;
    if (std::abs(sum) >= std::abs(t))
      comp += (sum - y) + t;
    else
      comp += (t - y) + sum;
    sum = y;
  }
  return sum + comp;
}

template <class PerChunk>
void run_chunks(std::size_t n_samples, std::uint64_t seed, PerChunk&& body) {
  for (std::size_t start = 0, chunk = 0; start < n_samples; start += kSampleChunk, ++chunk) {
    const std::size_t count = std::min(kSampleChunk, n_samples - start);
    body(make_engine(seed, chunk), count);
  }
}

}  // namespace

double evaluate_double(const PolyFunction& f, const std::vector<double>& point) {
  if (point.size() != std::size_t(f.dimension()))
    throw std::invalid_argument("evaluate_double: point dimension mismatch");
  return evaluate_terms(lower_terms(f), point);
}

SampleResult sample(const OuModel& model, const PolyFunction& f, std::size_t n_samples,
                    std::uint64_t seed) {
  if (!same_space(f, model.constant(0)))
    throw std::invalid_argument("sample: function does not belong to the model");
  const auto terms = lower_terms(f);
  const int dim = model.dimension();
  SampleResult result;
  result.values.reserve(n_samples);
  run_chunks(n_samples, seed, [&](std::mt19937_64 eng, std::size_t count) {
    NormalSource normals(std::move(eng));
    std::vector<double> x(dim);
    for (std::size_t i = 0; i < count; ++i) {
      for (int c = 0; c < dim; ++c) x[c] = normals.next();
      result.values.push_back(evaluate_terms(terms, x));
    }
  });
  return result;
}

SampleResult sample(const CubeModel& model, const CubeFunction& f, std::size_t n_samples,
                    std::uint64_t seed) {
  if (f.dimension() != model.dimension())
    throw std::invalid_argument("sample: function does not belong to the model");
  std::vector<double> table(std::size_t(f.point_count()));
  for (Eigen::Index p = 0; p < f.point_count(); ++p) table[std::size_t(p)] = f[p].to_double();
  const std::uint64_t mask = (std::uint64_t(1) << model.dimension()) - 1;
  SampleResult result;
  result.values.reserve(n_samples);
  run_chunks(n_samples, seed, [&](std::mt19937_64 eng, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) result.values.push_back(table[eng() & mask]);
  });
  return result;
}

SampleResult sample(const PoissonModel& model, const PoissonFunction& f,
                    std::size_t n_samples, std::uint64_t seed) {
  if (f.truncation() != model.truncation() || f.theta() != model.theta())
    throw std::invalid_argument("sample: function does not belong to the model");
  std::vector<double> table(std::size_t(f.truncation()) + 1);
  for (int j = 0; j <= f.truncation(); ++j) table[std::size_t(j)] = f[j].to_double();
  const double ell = std::exp(-model.theta().to_double());
  const int top = f.truncation();
  SampleResult result;
  result.values.reserve(n_samples);
  run_chunks(n_samples, seed, [&](std::mt19937_64 eng, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {
      int j;
      do {
        j = -1;
        double p = 1.0;
        do {
          ++j;
          p *= uniform01(eng);
        } while (p > ell);
        if (j > top) ++result.rejected;
      } while (j > top);
      result.values.push_back(table[std::size_t(j)]);
    }
  });
  return result;
}

std::vector<std::pair<Rational, Rational>> atom_distribution(const CubeFunction& f) {
  std::map<Rational, long> counts;
  for (Eigen::Index p = 0; p < f.point_count(); ++p) ++counts[f[p]];
  std::vector<std::pair<Rational, Rational>> atoms;
  atoms.reserve(counts.size());
  for (const auto& [value, count] : counts)
    atoms.emplace_back(value, Rational(count, long(f.point_count())));
  return atoms;
}

}  // namespace chaoslab

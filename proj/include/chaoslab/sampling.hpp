#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "chaoslab/cube.hpp"
#include "chaoslab/ou.hpp"
#include "chaoslab/poisson.hpp"

namespace chaoslab {

/// Samples are produced in fixed chunks of this size, one engine per chunk derived from
/// (seed, chunk index), so the value multiset does not depend on work partitioning.
inline constexpr std::size_t kSampleChunk = 65536;

struct SampleResult {
  std::vector<double> values;
  std::uint64_t rejected = 0;  // Poisson draws above the truncation, discarded and redrawn
};

/// Monte Carlo draws of the law of f under the model measure; deterministic given
/// (n_samples, seed).
SampleResult sample(const OuModel& model, const PolyFunction& f, std::size_t n_samples,
                    std::uint64_t seed);
SampleResult sample(const CubeModel& model, const CubeFunction& f, std::size_t n_samples,
                    std::uint64_t seed);
SampleResult sample(const PoissonModel& model, const PoissonFunction& f,
                    std::size_t n_samples, std::uint64_t seed);

/// Exact law of f on the cube: sorted (value, probability) atoms, duplicates merged.
std::vector<std::pair<Rational, Rational>> atom_distribution(const CubeFunction& f);

/// f at a point, compensated summation over monomials.
double evaluate_double(const PolyFunction& f, const std::vector<double>& point);

}  // namespace chaoslab

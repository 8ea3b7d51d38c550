#include "chaoslab/poisson.hpp"

#include <algorithm>
#include <stdexcept>

namespace chaoslab {

namespace {

constexpr int kMaxTruncation = 100000;

void check_same(const PoissonFunction& a, const PoissonFunction& b) {
  if (a.theta() != b.theta() || a.truncation() != b.truncation())
    throw std::invalid_argument("poisson: operands live on different lattices");
}

/// Weights theta^j / j! for j = 0..M (not normalized).
RationalVector weights(const Rational& theta, int truncation) {
  RationalVector w(truncation + 1);
  w[0] = Rational(1);
  for (int j = 1; j <= truncation; ++j) w[j] = w[j - 1] * theta / Rational(j);
  return w;
}

}  // namespace

PoissonFunction::PoissonFunction(Rational theta, int truncation, RationalVector values,
                                 int valid_upto)
    : theta_(std::move(theta)), trunc_(truncation), values_(std::move(values)),
      valid_(std::min(valid_upto, truncation)) {
  if (theta_.sign() <= 0) throw std::invalid_argument("poisson: theta must be positive");
  if (trunc_ < 2) throw std::invalid_argument("poisson: truncation too small");
  if (values_.size() != trunc_ + 1)
    throw std::invalid_argument("poisson: value vector size must be truncation + 1");
}

PoissonModel::PoissonModel(const Rational& theta) : theta_(theta) {
  if (theta.sign() <= 0) throw std::invalid_argument("poisson: theta must be positive");
  const Rational limit(Integer(1), Integer("1000000000000000000000000000000"));
  for (int m = 2; m <= kMaxTruncation; ++m) {
    if (relative_tail_bound(theta, m) < limit) {
      trunc_ = m;
      return;
    }
  }
  throw std::invalid_argument("poisson: no admissible truncation below the cap");
}

PoissonModel::PoissonModel(const Rational& theta, int truncation)
    : theta_(theta), trunc_(truncation) {
  if (theta.sign() <= 0) throw std::invalid_argument("poisson: theta must be positive");
  if (truncation < 2 || truncation > kMaxTruncation)
    throw std::invalid_argument("poisson: truncation out of range");
  if (Rational(truncation + 2) <= theta)
    throw std::invalid_argument("poisson: truncation below theta leaves no tail control");
}

Rational PoissonModel::relative_tail_bound(const Rational& theta, int truncation) {
  if (Rational(truncation + 2) <= theta)
    throw std::invalid_argument("poisson: truncation below theta leaves no tail control");
  const RationalVector w = weights(theta, truncation);
  Rational mass(0);
  for (int j = 0; j <= truncation; ++j) mass += w[j];
  // Geometric domination: sum_{j>M} w_j <= w_M * (theta/(M+1)) / (1 - theta/(M+2)).
  const Rational ratio = theta / Rational(truncation + 1);
  const Rational tail = w[truncation] * ratio / (Rational(1) - theta / Rational(truncation + 2));
  return tail / mass;
}

PoissonFunction PoissonModel::constant(const Rational& c) const {
  RationalVector v(trunc_ + 1);
  for (int j = 0; j <= trunc_; ++j) v[j] = c;
  return PoissonFunction(theta_, trunc_, std::move(v), trunc_);
}

PoissonFunction PoissonModel::delta(int j) const {
  if (j < 0 || j > trunc_) throw std::invalid_argument("poisson: delta index out of range");
  RationalVector v(trunc_ + 1);
  for (int i = 0; i <= trunc_; ++i) v[i] = Rational(0);
  v[j] = Rational(1);
  return PoissonFunction(theta_, trunc_, std::move(v), trunc_);
}

PoissonFunction PoissonModel::from_values(RationalVector values) const {
  return PoissonFunction(theta_, trunc_, std::move(values), trunc_);
}

PoissonFunction PoissonModel::charlier(int k) const {
  if (k < 0) throw std::invalid_argument("poisson: negative Charlier degree");
  // c_0 = 1, c_1 = j - theta, c_{k+1}(j) = (j - k - theta) c_k(j) - k theta c_{k-1}(j).
  RationalVector prev(trunc_ + 1), cur(trunc_ + 1);
  for (int j = 0; j <= trunc_; ++j) {
    prev[j] = Rational(1);
    cur[j] = Rational(j) - theta_;
  }
  if (k == 0) return PoissonFunction(theta_, trunc_, std::move(prev), trunc_);
  for (int n = 1; n < k; ++n) {
    RationalVector next(trunc_ + 1);
    for (int j = 0; j <= trunc_; ++j)
      next[j] = (Rational(j - n) - theta_) * cur[j] - Rational(n) * theta_ * prev[j];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return PoissonFunction(theta_, trunc_, std::move(cur), trunc_);
}

PoissonFunction apply_generator(const PoissonFunction& f) {
  const int M = f.truncation();
  const Rational& theta = f.theta();
  RationalVector out(M + 1);
  for (int j = 0; j <= M; ++j) {
    const Rational up = (j < M ? f[j + 1] : Rational(0)) - f[j];
    Rational v = theta * up;
    if (j > 0) v -= Rational(j) * (f[j] - f[j - 1]);
    out[j] = v;
  }
  return PoissonFunction(theta, M, std::move(out), std::min(f.valid_upto() - 1, M - 2));
}

PoissonFunction operator+(const PoissonFunction& a, const PoissonFunction& b) {
  check_same(a, b);
  return PoissonFunction(a.theta(), a.truncation(), a.values() + b.values(),
                         std::min(a.valid_upto(), b.valid_upto()));
}

PoissonFunction operator-(const PoissonFunction& a, const PoissonFunction& b) {
  check_same(a, b);
  return PoissonFunction(a.theta(), a.truncation(), a.values() - b.values(),
                         std::min(a.valid_upto(), b.valid_upto()));
}

PoissonFunction operator*(const PoissonFunction& a, const PoissonFunction& b) {
  check_same(a, b);
  return PoissonFunction(a.theta(), a.truncation(), a.values().cwiseProduct(b.values()),
                         std::min(a.valid_upto(), b.valid_upto()));
}

PoissonFunction operator*(const Rational& s, const PoissonFunction& f) {
  return PoissonFunction(f.theta(), f.truncation(), s * f.values(), f.valid_upto());
}

PoissonIntegral poisson_integral(const PoissonFunction& f) {
  const RationalVector w = weights(f.theta(), f.truncation());
  Rational mass(0), sum(0);
  for (int j = 0; j <= f.truncation(); ++j) {
    mass += w[j];
    sum += f[j] * w[j];
  }
  PoissonIntegral result;
  result.value = sum / mass;
  result.tail_bound = PoissonModel::relative_tail_bound(f.theta(), f.truncation());
  result.boundary_clean = f.boundary_clean();
  return result;
}

Rational integrate(const PoissonFunction& f) { return poisson_integral(f).value; }

bool is_zero(const PoissonFunction& f) {
  if (f.valid_upto() < 0) throw std::logic_error("poisson: no valid lattice range left");
  for (int j = 0; j <= f.valid_upto(); ++j)
    if (!f[j].is_zero()) return false;
  return true;
}

bool same_space(const PoissonFunction& a, const PoissonFunction& b) {
  return a.theta() == b.theta() && a.truncation() == b.truncation();
}

std::optional<Rational> constant_value(const PoissonFunction& f) {
  if (f.valid_upto() < 0) throw std::logic_error("poisson: no valid lattice range left");
  for (int j = 1; j <= f.valid_upto(); ++j)
    if (f[j] != f[0]) return std::nullopt;
  return f[0];
}

std::string dump_function(const PoissonFunction& f) {
  std::string out;
  for (int j = 0; j <= f.truncation(); ++j) {
    out += std::to_string(j);
    out += '\t';
    out += f[j].to_string();
    out += '\n';
  }
  return out;
}

}  // namespace chaoslab

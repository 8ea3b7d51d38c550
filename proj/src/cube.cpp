#include "chaoslab/cube.hpp"

#include <bit>
#include <cstdio>
#include <stdexcept>

namespace chaoslab {

namespace {

void check_same(const CubeFunction& a, const CubeFunction& b) {
  if (a.dimension() != b.dimension())
    throw std::invalid_argument("cube: dimension mismatch between operands");
}

}  // namespace

CubeFunction::CubeFunction(int dimension, RationalVector values)
    : dim_(dimension), values_(std::move(values)) {
  if (dimension < 1 || dimension > CubeModel::kMaxDimension)
    throw std::invalid_argument("cube: dimension out of range");
  if (values_.size() != (Eigen::Index(1) << dimension))
    throw std::invalid_argument("cube: value vector size must be 2^N");
}

CubeModel::CubeModel(int dimension) : dim_(dimension) {
  if (dimension < 1 || dimension > kMaxDimension)
    throw std::invalid_argument("cube: dimension out of range");
}

CubeFunction CubeModel::constant(const Rational& c) const {
  RationalVector v(point_count());
  for (Eigen::Index p = 0; p < v.size(); ++p) v[p] = c;
  return CubeFunction(dim_, std::move(v));
}

CubeFunction CubeModel::coordinate(int i) const {
  if (i < 1 || i > dim_) throw std::invalid_argument("cube: coordinate index out of range");
  return walsh(std::uint32_t(1) << (i - 1));
}

CubeFunction CubeModel::walsh(std::uint32_t subset) const {
  if (dim_ < 32 && subset >= (std::uint32_t(1) << dim_))
    throw std::invalid_argument("cube: Walsh subset beyond dimension");
  RationalVector v(point_count());
  for (Eigen::Index p = 0; p < v.size(); ++p)
    v[p] = (std::popcount(static_cast<std::uint32_t>(p) & subset) % 2 == 0) ? Rational(1)
                                                                            : Rational(-1);
  return CubeFunction(dim_, std::move(v));
}

CubeFunction CubeModel::from_values(RationalVector values) const {
  return CubeFunction(dim_, std::move(values));
}

CubeFunction apply_generator(const CubeFunction& f) {
  const int n = f.dimension();
  const Rational half(1, 2);
  const Rational count(n);
  RationalVector out(f.point_count());
  for (Eigen::Index p = 0; p < out.size(); ++p) {
    Rational acc(0);
    for (int i = 0; i < n; ++i) acc += f[p ^ (Eigen::Index(1) << i)];
    acc -= count * f[p];
    out[p] = half * acc;
  }
  return CubeFunction(n, std::move(out));
}

CubeFunction coordinate_difference(const CubeFunction& f, int i) {
  if (i < 1 || i > f.dimension())
    throw std::invalid_argument("cube: coordinate index out of range");
  RationalVector out(f.point_count());
  const Eigen::Index bit = Eigen::Index(1) << (i - 1);
  for (Eigen::Index p = 0; p < out.size(); ++p) out[p] = f[p ^ bit] - f[p];
  return CubeFunction(f.dimension(), std::move(out));
}

CubeFunction operator+(const CubeFunction& a, const CubeFunction& b) {
  check_same(a, b);
  return CubeFunction(a.dimension(), a.values() + b.values());
}

CubeFunction operator-(const CubeFunction& a, const CubeFunction& b) {
  check_same(a, b);
  return CubeFunction(a.dimension(), a.values() - b.values());
}

CubeFunction operator*(const CubeFunction& a, const CubeFunction& b) {
  check_same(a, b);
  return CubeFunction(a.dimension(), a.values().cwiseProduct(b.values()));
}

CubeFunction operator*(const Rational& s, const CubeFunction& f) {
  return CubeFunction(f.dimension(), s * f.values());
}

Rational integrate(const CubeFunction& f) {
  Rational sum(0);
  for (Eigen::Index p = 0; p < f.point_count(); ++p) sum += f[p];
  const Integer total = Integer(1) << f.dimension();
  return sum / Rational(total);
}

bool is_zero(const CubeFunction& f) {
  for (Eigen::Index p = 0; p < f.point_count(); ++p)
    if (!f[p].is_zero()) return false;
  return true;
}

bool same_space(const CubeFunction& a, const CubeFunction& b) {
  return a.dimension() == b.dimension();
}

std::optional<Rational> constant_value(const CubeFunction& f) {
  for (Eigen::Index p = 1; p < f.point_count(); ++p)
    if (f[p] != f[0]) return std::nullopt;
  return f[0];
}

std::map<std::uint32_t, Rational> walsh_coefficients(const CubeFunction& f) {
  // In-place fast Walsh-Hadamard butterfly, then exact division by 2^N.
  RationalVector v = f.values();
  const Eigen::Index size = v.size();
  for (Eigen::Index len = 1; len < size; len <<= 1) {
    for (Eigen::Index block = 0; block < size; block += len << 1) {
      for (Eigen::Index j = block; j < block + len; ++j) {
        const Rational a = v[j] + v[j + len];
        const Rational b = v[j] - v[j + len];
        v[j] = a;
        v[j + len] = b;
      }
    }
  }
  const Integer total = Integer(1) << f.dimension();
  const Rational norm(Integer(1), total);
  std::map<std::uint32_t, Rational> coeffs;
  for (Eigen::Index p = 0; p < size; ++p) {
    if (!v[p].is_zero()) coeffs.emplace(static_cast<std::uint32_t>(p), v[p] * norm);
  }
  return coeffs;
}

CubeFunction from_walsh_coefficients(const CubeModel& model,
                                     const std::map<std::uint32_t, Rational>& coeffs) {
  RationalVector v(model.point_count());
  for (Eigen::Index p = 0; p < v.size(); ++p) v[p] = Rational(0);
  for (const auto& [subset, coeff] : coeffs) {
    if (model.dimension() < 32 && subset >= (std::uint32_t(1) << model.dimension()))
      throw std::invalid_argument("cube: Walsh subset beyond dimension");
    for (Eigen::Index p = 0; p < v.size(); ++p) {
      if (std::popcount(static_cast<std::uint32_t>(p) & subset) % 2 == 0)
        v[p] += coeff;
      else
        v[p] -= coeff;
    }
  }
  return CubeFunction(model.dimension(), std::move(v));
}

std::string dump_function(const CubeFunction& f) {
  std::string out;
  char buf[24];
  for (Eigen::Index p = 0; p < f.point_count(); ++p) {
    std::snprintf(buf, sizeof(buf), "0x%llx", static_cast<unsigned long long>(p));
    out += buf;
    out += '\t';
    out += f[p].to_string();
    out += '\n';
  }
  return out;
}

}  // namespace chaoslab

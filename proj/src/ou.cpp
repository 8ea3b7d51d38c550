#include "chaoslab/ou.hpp"

#include <mutex>
#include <stdexcept>

namespace chaoslab {

namespace {

void check_same(const PolyFunction& a, const PolyFunction& b) {
  if (a.dimension() != b.dimension())
    throw std::invalid_argument("ou: dimension mismatch between operands");
}

}  // namespace

PolyFunction::PolyFunction(int dimension) : dim_(dimension) {
  if (dimension < 1) throw std::invalid_argument("ou: dimension must be positive");
}

int PolyFunction::total_degree() const {
  int deg = 0;
  for (const auto& [e, c] : terms_) {
    int d = 0;
    for (unsigned a : e) d += static_cast<int>(a);
    if (d > deg) deg = d;
  }
  return deg;
}

void PolyFunction::add_term(const Exponents& exponents, const Rational& coeff) {
  if (static_cast<int>(exponents.size()) != dim_)
    throw std::invalid_argument("ou: exponent tuple length must equal dimension");
  if (coeff.is_zero()) return;
  auto it = terms_.find(exponents);
  if (it == terms_.end()) {
    terms_.emplace(exponents, coeff);
    return;
  }
  it->second += coeff;
  if (it->second.is_zero()) terms_.erase(it);
}

Rational PolyFunction::evaluate(const std::vector<Rational>& point) const {
  if (static_cast<int>(point.size()) != dim_)
    throw std::invalid_argument("ou: evaluation point has wrong dimension");
  Rational sum(0);
  for (const auto& [e, c] : terms_) {
    Rational term = c;
    for (int i = 0; i < dim_; ++i)
      if (e[i] > 0) term *= pow(point[static_cast<std::size_t>(i)], e[i]);
    sum += term;
  }
  return sum;
}

PolyFunction PolyFunction::partial_derivative(int i) const {
  if (i < 1 || i > dim_) throw std::invalid_argument("ou: coordinate index out of range");
  PolyFunction out(dim_);
  const std::size_t idx = static_cast<std::size_t>(i - 1);
  for (const auto& [e, c] : terms_) {
    if (e[idx] == 0) continue;
    Exponents d = e;
    d[idx] -= 1;
    out.add_term(d, c * Rational(static_cast<long>(e[idx])));
  }
  return out;
}

OuModel::OuModel(int dimension) : dim_(dimension) {
  if (dimension < 1) throw std::invalid_argument("ou: dimension must be positive");
}

PolyFunction OuModel::constant(const Rational& c) const {
  PolyFunction f(dim_);
  f.add_term(Exponents(static_cast<std::size_t>(dim_), 0), c);
  return f;
}

PolyFunction OuModel::coordinate(int i) const {
  if (i < 1 || i > dim_) throw std::invalid_argument("ou: coordinate index out of range");
  Exponents e(static_cast<std::size_t>(dim_), 0);
  e[static_cast<std::size_t>(i - 1)] = 1;
  return monomial(e, Rational(1));
}

PolyFunction OuModel::monomial(const Exponents& exponents, const Rational& coeff) const {
  PolyFunction f(dim_);
  f.add_term(exponents, coeff);
  return f;
}

PolyFunction OuModel::hermite(const Exponents& multi_index) const {
  if (static_cast<int>(multi_index.size()) != dim_)
    throw std::invalid_argument("ou: Hermite multi-index length must equal dimension");
  PolyFunction f = constant(Rational(1));
  for (int i = 0; i < dim_; ++i) {
    const RationalPoly& he = hermite_monic(static_cast<int>(multi_index[i]));
    PolyFunction factor(dim_);
    for (int d = 0; d <= he.degree(); ++d) {
      if (he.coefficient(d).is_zero()) continue;
      Exponents e(static_cast<std::size_t>(dim_), 0);
      e[static_cast<std::size_t>(i)] = static_cast<unsigned>(d);
      factor.add_term(e, he.coefficient(d));
    }
    f = f * factor;
  }
  return f;
}

RationalPoly hermite_monic(int k) {
  if (k < 0) throw std::invalid_argument("ou: negative Hermite index");
  static std::vector<RationalPoly> cache{RationalPoly::constant(Rational(1)),
                                         RationalPoly::monomial(Rational(1), 1)};
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  const RationalPoly x = RationalPoly::monomial(Rational(1), 1);
  while (static_cast<int>(cache.size()) <= k) {
    const int n = static_cast<int>(cache.size()) - 1;
    cache.push_back(x * cache.back() - Rational(n) * cache[cache.size() - 2]);
  }
  return cache[static_cast<std::size_t>(k)];
}

PolyFunction apply_generator(const PolyFunction& f) {
  PolyFunction out(f.dimension());
  for (const auto& [e, c] : f.terms()) {
    int degree = 0;
    for (int i = 0; i < f.dimension(); ++i) {
      const unsigned a = e[static_cast<std::size_t>(i)];
      degree += static_cast<int>(a);
      if (a >= 2) {
        Exponents d = e;
        d[static_cast<std::size_t>(i)] -= 2;
        out.add_term(d, c * Rational(static_cast<long>(a) * static_cast<long>(a - 1)));
      }
    }
    if (degree > 0) out.add_term(e, -Rational(degree) * c);
  }
  return out;
}

PolyFunction operator+(const PolyFunction& a, const PolyFunction& b) {
  check_same(a, b);
  PolyFunction out = a;
  for (const auto& [e, c] : b.terms()) out.add_term(e, c);
  return out;
}

PolyFunction operator-(const PolyFunction& a, const PolyFunction& b) {
  check_same(a, b);
  PolyFunction out = a;
  for (const auto& [e, c] : b.terms()) out.add_term(e, -c);
  return out;
}

PolyFunction operator*(const PolyFunction& a, const PolyFunction& b) {
  check_same(a, b);
  PolyFunction out(a.dimension());
  const std::size_t n = static_cast<std::size_t>(a.dimension());
  Exponents sum(n);
  for (const auto& [ea, ca] : a.terms()) {
    for (const auto& [eb, cb] : b.terms()) {
      for (std::size_t i = 0; i < n; ++i) sum[i] = ea[i] + eb[i];
      out.add_term(sum, ca * cb);
    }
  }
  return out;
}

PolyFunction operator*(const Rational& s, const PolyFunction& f) {
  PolyFunction out(f.dimension());
  if (s.is_zero()) return out;
  for (const auto& [e, c] : f.terms()) out.add_term(e, s * c);
  return out;
}

Rational integrate(const PolyFunction& f) {
  Rational sum(0);
  for (const auto& [e, c] : f.terms()) {
    bool odd = false;
    for (unsigned a : e)
      if (a % 2 == 1) {
        odd = true;
        break;
      }
    if (odd) continue;
    Integer moment = 1;
    for (unsigned a : e)
      if (a > 0) moment *= double_factorial_odd(a / 2);
    sum += c * Rational(moment);
  }
  return sum;
}

bool is_zero(const PolyFunction& f) { return f.empty(); }

bool same_space(const PolyFunction& a, const PolyFunction& b) {
  return a.dimension() == b.dimension();
}

std::optional<Rational> constant_value(const PolyFunction& f) {
  if (f.empty()) return Rational(0);
  if (f.terms().size() > 1) return std::nullopt;
  const auto& [e, c] = *f.terms().begin();
  for (unsigned a : e)
    if (a != 0) return std::nullopt;
  return c;
}

PolyFunction gradient_dot(const PolyFunction& f, const PolyFunction& g) {
  check_same(f, g);
  PolyFunction out(f.dimension());
  for (int i = 1; i <= f.dimension(); ++i)
    out = out + f.partial_derivative(i) * g.partial_derivative(i);
  return out;
}

PolyFunction iterated_gradient_square(const PolyFunction& f, int m) {
  if (m < 1) throw std::invalid_argument("ou: gradient order must be >= 1");
  // Recursive sum over ordered index tuples of squared m-th partials.
  if (m == 1) return gradient_dot(f, f);
  PolyFunction out(f.dimension());
  for (int i = 1; i <= f.dimension(); ++i)
    out = out + iterated_gradient_square(f.partial_derivative(i), m - 1);
  return out;
}

std::string dump_function(const PolyFunction& f) {
  std::string out;
  for (const auto& [e, c] : f.terms()) {
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(e[i]);
    }
    out += '\t';
    out += c.to_string();
    out += '\n';
  }
  return out;
}

}  // namespace chaoslab

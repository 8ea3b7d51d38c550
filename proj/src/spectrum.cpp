#include "chaoslab/spectrum.hpp"

#include <stdexcept>

namespace chaoslab {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

Spectrum Spectrum::from_list(std::vector<Rational> values) {
  if (values.empty()) throw std::invalid_argument("Spectrum: empty eigenvalue list");
  if (!values.front().is_zero())
    throw std::invalid_argument("Spectrum: lambda_0 must be 0, got " + values.front().to_string());
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i - 1] < values[i]))
      throw std::invalid_argument("Spectrum: eigenvalues must be strictly increasing at index " +
                                  std::to_string(i));
  }
  Spectrum s;
  s.rule_ = false;
  s.values_ = std::move(values);
  return s;
}

Spectrum Spectrum::parse(std::string_view text) {
  text = trim(text);
  if (text == "nat") return naturals();
  if (text.size() < 2 || text.front() != '[' || text.back() != ']')
    throw std::invalid_argument("Spectrum: expected 'nat' or '[...]', got '" + std::string(text) +
                                "'");
  text.remove_prefix(1);
  text.remove_suffix(1);
  std::vector<Rational> values;
  while (true) {
    const std::size_t comma = text.find(',');
    const std::string_view item = trim(text.substr(0, comma));
    if (item.empty()) throw std::invalid_argument("Spectrum: empty list entry");
    values.push_back(Rational::from_string(item));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return from_list(std::move(values));
}

Rational Spectrum::eigenvalue(int n) const {
  if (n < 0) throw std::invalid_argument("Spectrum: negative index");
  if (rule_) return Rational(n);
  if (n >= static_cast<int>(values_.size()))
    throw std::invalid_argument("Spectrum: eigenvalue index " + std::to_string(n) +
                                " beyond list of size " + std::to_string(values_.size()));
  return values_[static_cast<std::size_t>(n)];
}

std::string Spectrum::to_string() const {
  if (rule_) return "nat";
  std::string out = "[";
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (i) out += ", ";
    out += values_[i].to_string();
  }
  out += "]";
  return out;
}

}  // namespace chaoslab

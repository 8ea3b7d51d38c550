#pragma once

#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "chaoslab/rational.hpp"

namespace chaoslab {

/// Pure point spectrum 0 = lambda_0 < lambda_1 < lambda_2 < ... , given either by the
/// rule lambda_n = n (unbounded) or by an explicit finite increasing list starting at 0.
class Spectrum {
 public:
  static Spectrum naturals() { return Spectrum(); }

  /// Validates: nonempty, first value 0, strictly increasing.
  static Spectrum from_list(std::vector<Rational> values);

  /// Accepts "nat" or a bracketed list "[0, 1/2, 3/2]".
  static Spectrum parse(std::string_view text);

  bool is_rule_naturals() const { return rule_; }

  /// Largest n for which eigenvalue(n) is defined; INT_MAX for the rule form.
  int max_index() const {
    return rule_ ? std::numeric_limits<int>::max() : static_cast<int>(values_.size()) - 1;
  }

  bool has(int n) const { return n >= 0 && n <= max_index(); }

  Rational eigenvalue(int n) const;

  std::string to_string() const;

 private:
  Spectrum() : rule_(true) {}

  bool rule_;
  std::vector<Rational> values_;
};

}  // namespace chaoslab

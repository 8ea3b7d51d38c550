#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "chaoslab/chaos_spec.hpp"
#include "chaoslab/spectrum.hpp"

namespace chaoslab {

enum class ExperimentKind { verify, normal_convergence, gamma_convergence, spectral_check };

/// Built-in chaos families for the convergence runners. The schedule entry is the
/// family size parameter: pair count m for paired-product, coordinate count N for
/// constant-coefficient, summand count d for square-sum, model dimension for random.
/// Families with irrational normalization are realized through an unnormalized
/// representative with integer coefficients; exact columns are reported in the
/// normalized sense and samples are rescaled at comparison time.
enum class ChaosFamily { paired_product, constant_coefficient, square_sum, random_family };

std::string_view to_string(ExperimentKind kind);
std::string_view to_string(ChaosFamily family);
ExperimentKind parse_experiment_kind(std::string_view text);
ChaosFamily parse_chaos_family(std::string_view text);

/// Config parse or validation failure. line is 1-based for errors tied to a config
/// line and 0 for semantic errors spanning several keys.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::verify;
  std::vector<ModelTag> models{ModelTag::cube, ModelTag::ou};
  ModelTag model = ModelTag::ou;
  Spectrum spectrum = Spectrum::naturals();
  int degree = 2;
  std::vector<int> cube_dims{4, 5, 6, 7, 8, 9, 10};
  std::vector<int> ou_dims{1, 2, 3};
  std::vector<int> dims;
  ChaosFamily family = ChaosFamily::paired_product;
  int cube_kmax = 4;
  int ou_kmax = 3;
  int seeds = 50;
  std::size_t samples = 100000;
  std::uint64_t seed = 0;
  int n_max = 50;
  int threads = 1;
  std::string out = "-";
};

ExperimentConfig default_config(ExperimentKind kind);

/// Flat key=value text; '#' starts a comment and blank lines are skipped. Recognized
/// keys: experiment, models, model, spectrum, k, dims, cube-dims, ou-dims, family,
/// cube-kmax, ou-kmax, seeds, samples, seed, n-max, threads, out. Unknown keys,
/// malformed values and semantic violations throw ConfigError. When expected_kind is
/// set, a conflicting experiment key in the text is an error and the defaults are
/// those of the expected kind.
ExperimentConfig parse_config(std::string_view text,
                              std::optional<ExperimentKind> expected_kind = std::nullopt);
ExperimentConfig load_config(const std::string& path,
                             std::optional<ExperimentKind> expected_kind = std::nullopt);

/// Semantic checks (schedule monotone, family/model compatibility, normalization
/// constraints); throws ConfigError on violation.
void validate_config(const ExperimentConfig& config);

/// Runners stream one CSV table (header first) and return the process exit code:
/// 0 all checks pass, 1 a verified inequality or sign condition fails. Rows are
/// bitwise deterministic given the config; the thread count only changes scheduling.
int run_verify(const ExperimentConfig& config, std::ostream& out);
int run_normal_convergence(const ExperimentConfig& config, std::ostream& out);
int run_gamma_convergence(const ExperimentConfig& config, std::ostream& out);
int run_spectral_check(const ExperimentConfig& config, std::ostream& out);
int run_experiment(const ExperimentConfig& config, std::ostream& out);

}  // namespace chaoslab

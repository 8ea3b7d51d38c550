#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chaoslab/experiments.hpp"

namespace {

using chaoslab::ConfigError;
using chaoslab::ExperimentConfig;
using chaoslab::ExperimentKind;

struct CommonFlags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
};

struct SubcommandFlags {
  CommonFlags common;
  std::optional<std::string> models;
  std::optional<std::string> model;
  std::optional<std::string> dims;
  std::optional<std::string> family;
  std::optional<std::string> spectrum;
  std::optional<int> degree;
  std::optional<int> kmax;
  std::optional<int> seeds;
  std::optional<int> n_max;
  std::optional<long long> samples;
};

void add_common(CLI::App* sub, SubcommandFlags& flags) {
  sub->add_option("--config", flags.common.config, "key=value config file");
  sub->add_option("--out", flags.common.out, "output path ('-' for stdout)");
  sub->add_option("--seed", flags.common.seed, "base RNG seed");
  sub->add_option("--threads", flags.common.threads,
                  "schedule points evaluated concurrently");
}

std::vector<int> parse_dims_flag(const std::string& text) {
  std::vector<int> dims;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto end = comma == std::string::npos ? text.size() : comma;
    const std::string part = text.substr(pos, end - pos);
    try {
      std::size_t used = 0;
      dims.push_back(std::stoi(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw ConfigError(0, "--dims needs a comma-separated integer list");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return dims;
}

std::vector<chaoslab::ModelTag> parse_models_flag(const std::string& text) {
  std::vector<chaoslab::ModelTag> tags;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto end = comma == std::string::npos ? text.size() : comma;
    tags.push_back(chaoslab::parse_model_tag(text.substr(pos, end - pos)));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return tags;
}

ExperimentConfig build_config(ExperimentKind kind, const SubcommandFlags& flags) {
  ExperimentConfig c = flags.common.config.empty()
                           ? chaoslab::default_config(kind)
                           : chaoslab::load_config(flags.common.config, kind);
  if (flags.models) c.models = parse_models_flag(*flags.models);
  if (flags.model) c.model = chaoslab::parse_model_tag(*flags.model);
  if (flags.dims) {
    const std::vector<int> dims = parse_dims_flag(*flags.dims);
    if (kind == ExperimentKind::verify) {
      c.cube_dims = dims;
      c.ou_dims = dims;
    } else {
      c.dims = dims;
    }
  }
  if (flags.family) c.family = chaoslab::parse_chaos_family(*flags.family);
  if (flags.spectrum) c.spectrum = chaoslab::Spectrum::parse(*flags.spectrum);
  if (flags.degree) c.degree = *flags.degree;
  if (flags.kmax) {
    c.cube_kmax = *flags.kmax;
    c.ou_kmax = *flags.kmax;
  }
  if (flags.seeds) c.seeds = *flags.seeds;
  if (flags.n_max) c.n_max = *flags.n_max;
  if (flags.samples) {
    if (*flags.samples < 1) throw ConfigError(0, "--samples must be >= 1");
    c.samples = std::size_t(*flags.samples);
  }
  if (const char* env = std::getenv("CHAOSLAB_SEED")) {
    try {
      std::size_t used = 0;
      c.seed = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument(env);
    } catch (const std::exception&) {
      throw ConfigError(0, "CHAOSLAB_SEED must be an unsigned integer");
    }
  }
  if (flags.common.seed) c.seed = *flags.common.seed;
  if (flags.common.threads) c.threads = *flags.common.threads;
  if (!flags.common.out.empty()) c.out = flags.common.out;
  chaoslab::validate_config(c);
  return c;
}

int dispatch(ExperimentKind kind, const SubcommandFlags& flags) {
  ExperimentConfig c;
  try {
    c = build_config(kind, flags);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(0, e.what());
  }
  if (c.out == "-") return chaoslab::run_experiment(c, std::cout);
  std::ofstream file(c.out);
  if (!file) throw ConfigError(0, "cannot open output file '" + c.out + "'");
  return chaoslab::run_experiment(c, file);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chaoslab: exact chaos verification and convergence experiments"};
  app.require_subcommand(1);

  SubcommandFlags verify_flags;
  CLI::App* verify = app.add_subcommand(
      "verify", "exact identity battery over seeded random chaos");
  add_common(verify, verify_flags);
  verify->add_option("--models", verify_flags.models, "comma list from cube,ou");
  verify->add_option("--dims", verify_flags.dims,
                     "dimension schedule for every selected model");
  verify->add_option("--kmax", verify_flags.kmax, "largest chaos degree per model");
  verify->add_option("--seeds", verify_flags.seeds, "random chaos draws per size");
  verify->add_option("--spectrum", verify_flags.spectrum,
                     "'nat' or an explicit list; lists run the sign check only");
  verify->add_option("--k", verify_flags.degree, "degree for explicit-spectrum checks");
  verify->add_option("--n-max", verify_flags.n_max, "largest spectral index checked");

  SubcommandFlags normal_flags;
  CLI::App* normal = app.add_subcommand(
      "normal", "normal-target convergence columns along a family schedule");
  add_common(normal, normal_flags);
  normal->add_option("--model", normal_flags.model, "cube or ou");
  normal->add_option("--family", normal_flags.family,
                     "paired-product, square-sum or random");
  normal->add_option("--dims", normal_flags.dims, "family size schedule");
  normal->add_option("--samples", normal_flags.samples, "Monte Carlo sample count");
  normal->add_option("--k", normal_flags.degree, "chaos degree for the random family");

  SubcommandFlags gamma_flags;
  CLI::App* gamma = app.add_subcommand(
      "gamma", "gamma-target criterion columns along a family schedule");
  add_common(gamma, gamma_flags);
  gamma->add_option("--family", gamma_flags.family,
                    "constant-coefficient, square-sum, paired-product or random");
  gamma->add_option("--dims", gamma_flags.dims, "family size schedule");
  gamma->add_option("--samples", gamma_flags.samples, "Monte Carlo sample count");
  gamma->add_option("--k", gamma_flags.degree, "chaos degree for the random family");

  SubcommandFlags spectral_flags;
  CLI::App* spectral = app.add_subcommand(
      "spectral", "sign table for the chaos bound hypothesis");
  add_common(spectral, spectral_flags);
  spectral->add_option("--k", spectral_flags.degree, "chaos degree");
  spectral->add_option("--n-max", spectral_flags.n_max, "largest spectral index checked");
  spectral->add_option("--spectrum", spectral_flags.spectrum,
                       "'nat' or an explicit list like [0, 1/2, 3/2]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (verify->parsed()) return dispatch(ExperimentKind::verify, verify_flags);
    if (normal->parsed())
      return dispatch(ExperimentKind::normal_convergence, normal_flags);
    if (gamma->parsed())
      return dispatch(ExperimentKind::gamma_convergence, gamma_flags);
    return dispatch(ExperimentKind::spectral_check, spectral_flags);
  } catch (const ConfigError& e) {
    if (e.line() > 0)
      std::cerr << "config error (line " << e.line() << "): " << e.what() << '\n';
    else
      std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

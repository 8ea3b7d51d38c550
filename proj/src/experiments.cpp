#include "chaoslab/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <future>
#include <ostream>
#include <sstream>

#include "chaoslab/gamma_calculus.hpp"
#include "chaoslab/rng.hpp"
#include "chaoslab/sampling.hpp"
#include "chaoslab/spectral_polys.hpp"
#include "chaoslab/stein.hpp"

namespace chaoslab {

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::verify: return "verify";
    case ExperimentKind::normal_convergence: return "normal-convergence";
    case ExperimentKind::gamma_convergence: return "gamma-convergence";
    case ExperimentKind::spectral_check: return "spectral-check";
  }
  throw std::logic_error("experiments: bad kind");
}

std::string_view to_string(ChaosFamily family) {
  switch (family) {
    case ChaosFamily::paired_product: return "paired-product";
    case ChaosFamily::constant_coefficient: return "constant-coefficient";
    case ChaosFamily::square_sum: return "square-sum";
    case ChaosFamily::random_family: return "random";
  }
  throw std::logic_error("experiments: bad family");
}

ExperimentKind parse_experiment_kind(std::string_view text) {
  if (text == "verify") return ExperimentKind::verify;
  if (text == "normal-convergence" || text == "normal")
    return ExperimentKind::normal_convergence;
  if (text == "gamma-convergence" || text == "gamma")
    return ExperimentKind::gamma_convergence;
  if (text == "spectral-check" || text == "spectral")
    return ExperimentKind::spectral_check;
  throw std::invalid_argument("unknown experiment '" + std::string(text) + "'");
}

ChaosFamily parse_chaos_family(std::string_view text) {
  if (text == "paired-product") return ChaosFamily::paired_product;
  if (text == "constant-coefficient") return ChaosFamily::constant_coefficient;
  if (text == "square-sum") return ChaosFamily::square_sum;
  if (text == "random") return ChaosFamily::random_family;
  throw std::invalid_argument("unknown family '" + std::string(text) + "'");
}

ConfigError::ConfigError(int line, const std::string& message)
    : std::runtime_error(message), line_(line) {}

ExperimentConfig default_config(ExperimentKind kind) {
  ExperimentConfig c;
  c.kind = kind;
  switch (kind) {
    case ExperimentKind::verify:
      break;
    case ExperimentKind::normal_convergence:
      c.family = ChaosFamily::paired_product;
      c.dims = {4, 16, 64, 256};
      break;
    case ExperimentKind::gamma_convergence:
      c.family = ChaosFamily::constant_coefficient;
      c.dims = {2, 9, 50, 289};
      c.model = ModelTag::ou;
      break;
    case ExperimentKind::spectral_check:
      c.degree = 4;
      break;
  }
  return c;
}

namespace {

struct ConfigLine {
  int number = 0;
  std::string key;
  std::string value;
};

std::string trim(std::string_view text) {
  const auto begin = text.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return {};
  const auto end = text.find_last_not_of(" \t\r");
  return std::string(text.substr(begin, end - begin + 1));
}

std::vector<ConfigLine> split_config_lines(std::string_view text) {
  std::vector<ConfigLine> lines;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view raw = text.substr(
        pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    ++number;
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    const auto hash = raw.find('#');
    if (hash != std::string_view::npos) raw = raw.substr(0, hash);
    const std::string stripped = trim(raw);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError(number, "expected key=value, got '" + stripped + "'");
    ConfigLine line;
    line.number = number;
    line.key = trim(std::string_view(stripped).substr(0, eq));
    line.value = trim(std::string_view(stripped).substr(eq + 1));
    if (line.key.empty()) throw ConfigError(number, "missing key before '='");
    if (line.value.empty()) throw ConfigError(number, "missing value for key '" + line.key + "'");
    lines.push_back(std::move(line));
  }
  return lines;
}

long long parse_integer_value(const ConfigLine& line, long long min_value,
                              long long max_value) {
  long long value = 0;
  const char* begin = line.value.data();
  const char* end = begin + line.value.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end)
    throw ConfigError(line.number, "key '" + line.key + "' needs an integer, got '" +
                                       line.value + "'");
  if (value < min_value || value > max_value)
    throw ConfigError(line.number, "key '" + line.key + "' out of range");
  return value;
}

std::uint64_t parse_u64_value(const ConfigLine& line) {
  std::uint64_t value = 0;
  const char* begin = line.value.data();
  const char* end = begin + line.value.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end)
    throw ConfigError(line.number, "key '" + line.key +
                                       "' needs an unsigned integer, got '" + line.value +
                                       "'");
  return value;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos <= value.size()) {
    const auto comma = value.find(',', pos);
    const auto end = comma == std::string::npos ? value.size() : comma;
    parts.push_back(trim(std::string_view(value).substr(pos, end - pos)));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return parts;
}

std::vector<int> parse_int_list(const ConfigLine& line) {
  std::vector<int> values;
  for (const std::string& part : split_list(line.value)) {
    int value = 0;
    const char* begin = part.data();
    const char* end = begin + part.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (part.empty() || ec != std::errc() || ptr != end)
      throw ConfigError(line.number, "key '" + line.key +
                                         "' needs a comma-separated integer list");
    values.push_back(value);
  }
  return values;
}

std::vector<ModelTag> parse_model_list(const ConfigLine& line) {
  std::vector<ModelTag> tags;
  for (const std::string& part : split_list(line.value)) {
    try {
      tags.push_back(parse_model_tag(part));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(line.number, e.what());
    }
  }
  return tags;
}

void apply_config_key(ExperimentConfig& c, const ConfigLine& line) {
  try {
    if (line.key == "models")
      c.models = parse_model_list(line);
    else if (line.key == "model")
      c.model = parse_model_tag(line.value);
    else if (line.key == "spectrum")
      c.spectrum = Spectrum::parse(line.value);
    else if (line.key == "k")
      c.degree = int(parse_integer_value(line, 1, 1000));
    else if (line.key == "dims")
      c.dims = parse_int_list(line);
    else if (line.key == "cube-dims")
      c.cube_dims = parse_int_list(line);
    else if (line.key == "ou-dims")
      c.ou_dims = parse_int_list(line);
    else if (line.key == "family")
      c.family = parse_chaos_family(line.value);
    else if (line.key == "cube-kmax")
      c.cube_kmax = int(parse_integer_value(line, 1, 20));
    else if (line.key == "ou-kmax")
      c.ou_kmax = int(parse_integer_value(line, 1, 20));
    else if (line.key == "seeds")
      c.seeds = int(parse_integer_value(line, 1, 1000000));
    else if (line.key == "samples")
      c.samples = std::size_t(parse_integer_value(line, 1, 1000000000));
    else if (line.key == "seed")
      c.seed = parse_u64_value(line);
    else if (line.key == "n-max")
      c.n_max = int(parse_integer_value(line, 0, 1000000));
    else if (line.key == "threads")
      c.threads = int(parse_integer_value(line, 1, 256));
    else if (line.key == "out")
      c.out = line.value;
    else
      throw ConfigError(line.number, "unknown key '" + line.key + "'");
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(line.number, e.what());
  }
}

bool strictly_increasing(const std::vector<int>& values) {
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] <= values[i - 1]) return false;
  return true;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(0, message);
}

long long exact_isqrt(long long value) {
  if (value < 0) return -1;
  long long root = std::llround(std::sqrt(double(value)));
  while (root > 0 && root * root > value) --root;
  while ((root + 1) * (root + 1) <= value) ++root;
  return root;
}

bool is_perfect_square(long long value) {
  const long long root = exact_isqrt(value);
  return root >= 0 && root * root == value;
}

void validate_schedule(const std::vector<int>& dims, const std::string& label) {
  require(!dims.empty(), label + ": dimension schedule must not be empty");
  require(strictly_increasing(dims), label + ": dimension schedule must be strictly increasing");
  require(dims.front() >= 1, label + ": dimensions must be >= 1");
}

}  // namespace

void validate_config(const ExperimentConfig& c) {
  require(c.seeds >= 1, "seeds must be >= 1");
  require(c.samples >= 1, "samples must be >= 1");
  require(c.n_max >= 0, "n-max must be >= 0");
  require(c.threads >= 1, "threads must be >= 1");
  require(c.degree >= 1, "k must be >= 1");
  switch (c.kind) {
    case ExperimentKind::verify: {
      require(!c.models.empty(), "verify: at least one model required");
      for (const ModelTag tag : c.models)
        require(tag != ModelTag::poisson,
                "verify: the poisson lattice is truncated and carries no exact chaos "
                "spaces; choose models from cube, ou");
      validate_schedule(c.cube_dims, "verify cube");
      validate_schedule(c.ou_dims, "verify ou");
      require(c.cube_dims.back() <= CubeModel::kMaxDimension,
              "verify: cube dimension exceeds the model limit");
      break;
    }
    case ExperimentKind::normal_convergence: {
      validate_schedule(c.dims, "normal");
      require(c.spectrum.is_rule_naturals(),
              "convergence experiments use the built-in natural spectra");
      require(c.model == ModelTag::cube || c.model == ModelTag::ou,
              "normal: model must be cube or ou");
      switch (c.family) {
        case ChaosFamily::paired_product:
          if (c.model == ModelTag::cube)
            require(2 * c.dims.back() <= CubeModel::kMaxDimension,
                    "cube paired-product: pair count m needs 2m <= " +
                        std::to_string(CubeModel::kMaxDimension));
          break;
        case ChaosFamily::constant_coefficient:
          throw ConfigError(0,
                            "constant-coefficient targets the gamma law; run it under "
                            "experiment=gamma-convergence");
        case ChaosFamily::square_sum:
          require(c.model == ModelTag::ou, "square-sum family needs the ou model");
          break;
        case ChaosFamily::random_family:
          if (c.model == ModelTag::cube) {
            require(c.dims.back() <= CubeModel::kMaxDimension,
                    "random family: cube dimension exceeds the model limit");
            require(c.degree <= c.dims.front(),
                    "random family: degree must be <= the smallest cube dimension");
          } else {
            require(c.dims.back() <= 10,
                    "random family: symbolic moments need dimension <= 10");
          }
          break;
      }
      break;
    }
    case ExperimentKind::gamma_convergence: {
      validate_schedule(c.dims, "gamma");
      require(c.spectrum.is_rule_naturals(),
              "convergence experiments use the built-in natural spectra");
      require(c.model == ModelTag::ou,
              "gamma: the gamma-target experiment needs the ou model");
      if (c.family == ChaosFamily::random_family) {
        require(c.degree % 2 == 0, "gamma: the gamma target needs an even chaos degree");
        require(c.dims.back() <= 10,
                "random family: symbolic moments need dimension <= 10");
      } else {
        require(c.degree == 2,
                "gamma: the built-in families are degree-2 chaos; set k=2 or family=random");
        if (c.family == ChaosFamily::constant_coefficient)
          for (const int n : c.dims)
            require(n >= 2 && is_perfect_square(static_cast<long long>(n) * (n - 1) / 2),
                    "constant-coefficient: exact normalization needs N(N-1)/2 to be a "
                    "perfect square (N = 2, 9, 50, 289, ...)");
      }
      break;
    }
    case ExperimentKind::spectral_check:
      break;
  }
}

ExperimentConfig parse_config(std::string_view text,
                              std::optional<ExperimentKind> expected_kind) {
  const std::vector<ConfigLine> lines = split_config_lines(text);
  ExperimentKind kind = expected_kind.value_or(ExperimentKind::verify);
  for (const ConfigLine& line : lines) {
    if (line.key != "experiment") continue;
    ExperimentKind file_kind;
    try {
      file_kind = parse_experiment_kind(line.value);
    } catch (const std::exception& e) {
      throw ConfigError(line.number, e.what());
    }
    if (expected_kind && file_kind != *expected_kind)
      throw ConfigError(line.number, "config experiment '" + line.value +
                                         "' does not match the requested experiment '" +
                                         std::string(to_string(*expected_kind)) + "'");
    kind = file_kind;
  }
  ExperimentConfig c = default_config(kind);
  for (const ConfigLine& line : lines)
    if (line.key != "experiment") apply_config_key(c, line);
  validate_config(c);
  return c;
}

ExperimentConfig load_config(const std::string& path,
                             std::optional<ExperimentKind> expected_kind) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), expected_kind);
}

namespace {

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

struct BatchResult {
  std::string csv;
  bool all_pass = true;
};

void append_row(BatchResult& batch, const VerificationReport& report) {
  batch.csv += verification_csv_row(report);
  batch.csv += '\n';
  batch.all_pass = batch.all_pass && report.pass;
}

bool emit_batches(std::vector<std::function<BatchResult()>> jobs, int threads,
                  std::ostream& out) {
  bool all_pass = true;
  if (threads <= 1) {
    for (auto& job : jobs) {
      const BatchResult batch = job();
      out << batch.csv;
      all_pass = all_pass && batch.all_pass;
    }
    return all_pass;
  }
  std::vector<std::future<BatchResult>> futures;
  futures.reserve(jobs.size());
  for (auto& job : jobs) futures.push_back(std::async(std::launch::async, job));
  for (auto& future : futures) {
    const BatchResult batch = future.get();
    out << batch.csv;
    all_pass = all_pass && batch.all_pass;
  }
  return all_pass;
}

template <class Model>
BatchResult battery_point(const Spectrum& s, ModelTag tag, int N, int kmax, int seeds,
                          std::uint64_t point_seed) {
  BatchResult batch;
  const Model model(N);
  for (int k = 1; k <= kmax; ++k) {
    if (tag == ModelTag::cube && k > N) continue;
    const Rational lambda = s.eigenvalue(k);
    for (int index = 0; index < seeds; ++index) {
      const std::uint64_t seed =
          mix_seed(mix_seed(point_seed, std::uint64_t(k)), std::uint64_t(index));
      const ChaosSpec spec = random_chaos(tag, N, k, seed);
      const auto chaos = materialize_chaos(spec, model);
      const auto tower = build_gamma_tower(chaos.function, lambda, std::max(3, k + 1));
      const ReportContext ctx{std::string(to_string(tag)), N, k, seed};
      append_row(batch, is_chaos(s, tower, k, ctx));
      append_row(batch, verify_q_derivative_link(s, tower, k, ctx));
      append_row(batch, verify_q_mean(s, tower, k, ctx));
      append_row(batch, verify_integral_shift(tower, 1, 1, ctx));
      append_row(batch, verify_integral_shift(tower, 1, 2, ctx));
      append_row(batch, verify_integral_shift(tower, 2, 1, ctx));
      append_row(batch, verify_variance_identity(s, tower, k, ctx));
      append_row(batch, verify_variance_bound(s, tower, k, ctx));
      append_row(batch, verify_gamma_target_bound(s, tower, k, chaos.norm2, ctx));
      if (tag == ModelTag::ou) {
        append_row(batch, fourth_moment_form(tower, k, ctx));
        if (k % 2 == 0)
          append_row(batch,
                     verify_gamma_target_fourth_moment(chaos.function, k, chaos.norm2, ctx));
      }
    }
  }
  return batch;
}

BatchResult spectral_point(const Spectrum& s, int k, int n_max) {
  BatchResult batch;
  const SpectralConditionReport report = check_spectral_condition(s, k, n_max);
  for (const auto& [n, value] : report.values) {
    VerificationReport row;
    row.identity = "spectral-condition";
    row.context = ReportContext{"spectrum", n, k, 0};
    row.lhs = value;
    row.rhs = Rational(0);
    row.residual = -value;
    row.pass = value.sign() <= 0;
    append_row(batch, row);
  }
  return batch;
}

PolyFunction paired_poly(const OuModel& model, int pairs) {
  PolyFunction g = model.constant(Rational(0));
  Exponents exponents(std::size_t(2 * pairs), 0);
  for (int i = 0; i < pairs; ++i) {
    exponents[std::size_t(2 * i)] = 1;
    exponents[std::size_t(2 * i + 1)] = 1;
    g.add_term(exponents, Rational(1));
    exponents[std::size_t(2 * i)] = 0;
    exponents[std::size_t(2 * i + 1)] = 0;
  }
  return g;
}

CubeFunction paired_walsh(const CubeModel& model, int pairs) {
  CubeFunction g = model.constant(Rational(0));
  for (int i = 0; i < pairs; ++i)
    g = g + model.walsh(std::uint32_t(0b11) << (2 * i));
  return g;
}

PolyFunction square_sum_poly(const OuModel& model, int count) {
  PolyFunction f = model.constant(Rational(-long(count), 2));
  Exponents exponents(std::size_t(count), 0);
  for (int i = 0; i < count; ++i) {
    exponents[std::size_t(i)] = 2;
    f.add_term(exponents, Rational(1, 2));
    exponents[std::size_t(i)] = 0;
  }
  return f;
}

/// Same law as sum_{i<j} x_i x_j: the quadratic form diagonalizes to
/// ((N-1) y_1^2 - y_2^2 - ... - y_N^2) / 2 under an orthogonal change of variables,
/// which samples in O(N) per draw instead of O(N^2).
PolyFunction diagonal_pair_sum(const OuModel& model, int n) {
  PolyFunction f = model.constant(Rational(0));
  Exponents exponents(std::size_t(n), 0);
  exponents[0] = 2;
  f.add_term(exponents, Rational(n - 1, 2));
  exponents[0] = 0;
  for (int j = 1; j < n; ++j) {
    exponents[std::size_t(j)] = 2;
    f.add_term(exponents, Rational(-1, 2));
    exponents[std::size_t(j)] = 0;
  }
  return f;
}

struct NormalRow {
  int size = 0;
  Rational fourth_moment;
  Rational var_gamma;
  double stein_bound = 0.0;
  double emp_distance = 0.0;
  double mc_error = 0.0;
};

std::string normal_row_csv(const NormalRow& row) {
  std::ostringstream os;
  os << row.size << ',' << row.fourth_moment << ',' << row.var_gamma << ','
     << format_double(row.stein_bound) << ',' << format_double(row.emp_distance) << ','
     << format_double(row.mc_error) << '\n';
  return os.str();
}

NormalRow normal_point(const ExperimentConfig& c, int size) {
  const std::uint64_t seed = mix_seed(c.seed, std::uint64_t(size));
  const DistanceTarget target = DistanceTarget::normal();
  NormalRow row;
  row.size = size;
  switch (c.family) {
    case ChaosFamily::paired_product: {
      if (c.model == ModelTag::ou) {
        row.fourth_moment = Rational(3) + Rational(6, size);
        row.var_gamma = Rational(4, size);
        const OuModel model(2 * size);
        const EmpiricalDistance e =
            sample_distance(sample(model, paired_poly(model, size), c.samples, seed),
                            1.0 / std::sqrt(double(size)), target, seed);
        row.emp_distance = e.estimate;
        row.mc_error = e.error_proxy;
      } else {
        row.fourth_moment = Rational(3) - Rational(2, size);
        const CubeModel model(2 * size);
        const CubeFunction g = paired_walsh(model, size);
        row.var_gamma =
            size <= 8 ? function_variance(carre_du_champ(g, g)) : Rational(0);
        const EmpiricalDistance e =
            atom_distance(atom_distribution(g), 1.0 / std::sqrt(double(size)), target);
        row.emp_distance = e.estimate;
      }
      row.stein_bound = std::sqrt(row.var_gamma.to_double()) / 2.0;
      break;
    }
    case ChaosFamily::square_sum: {
      row.fourth_moment = Rational(3) + Rational(12, size);
      row.var_gamma = Rational(8, size);
      row.stein_bound = std::sqrt(row.var_gamma.to_double()) / 2.0;
      const OuModel model(size);
      const EmpiricalDistance e =
          sample_distance(sample(model, square_sum_poly(model, size), c.samples, seed),
                          std::sqrt(2.0 / double(size)), target, seed);
      row.emp_distance = e.estimate;
      row.mc_error = e.error_proxy;
      break;
    }
    case ChaosFamily::random_family: {
      const ChaosSpec spec = random_chaos(c.model, size, c.degree, seed);
      if (c.model == ModelTag::cube) {
        const CubeModel model(size);
        const auto chaos = materialize_chaos(spec, model);
        const CubeFunction gamma = carre_du_champ(chaos.function, chaos.function);
        const Rational norm_sq = chaos.norm2 * chaos.norm2;
        row.fourth_moment =
            integrate(chaos.function * chaos.function * chaos.function * chaos.function) /
            norm_sq;
        row.var_gamma = function_variance(gamma) / norm_sq;
        const EmpiricalDistance e =
            atom_distance(atom_distribution(chaos.function),
                          1.0 / std::sqrt(chaos.norm2.to_double()), target);
        row.emp_distance = e.estimate;
      } else {
        const OuModel model(size);
        const auto chaos = materialize_chaos(spec, model);
        const PolyFunction gamma = carre_du_champ(chaos.function, chaos.function);
        const Rational norm_sq = chaos.norm2 * chaos.norm2;
        row.fourth_moment =
            integrate(chaos.function * chaos.function * chaos.function * chaos.function) /
            norm_sq;
        row.var_gamma = function_variance(gamma) / norm_sq;
        const EmpiricalDistance e =
            sample_distance(sample(model, chaos.function, c.samples, seed),
                            1.0 / std::sqrt(chaos.norm2.to_double()), target, seed);
        row.emp_distance = e.estimate;
        row.mc_error = e.error_proxy;
      }
      row.stein_bound = std::sqrt(row.var_gamma.to_double()) / double(c.degree);
      break;
    }
    case ChaosFamily::constant_coefficient:
      throw std::logic_error("experiments: family rejected by validation");
  }
  return row;
}

struct GammaRow {
  int size = 0;
  Rational criterion;
  Rational var_h;
  Rational slack;
  double emp_distance = 0.0;
  double mc_error = 0.0;
  bool pass = true;
};

std::string gamma_row_csv(const GammaRow& row) {
  std::ostringstream os;
  os << row.size << ',' << row.criterion << ',' << row.var_h << ',' << row.slack << ','
     << format_double(row.emp_distance) << ',' << format_double(row.mc_error) << '\n';
  return os.str();
}

GammaRow gamma_point(const ExperimentConfig& c, int size) {
  const std::uint64_t seed = mix_seed(c.seed, std::uint64_t(size));
  GammaRow row;
  row.size = size;
  switch (c.family) {
    case ChaosFamily::constant_coefficient: {
      const long long pair_count = static_cast<long long>(size) * (size - 1) / 2;
      const long long root = exact_isqrt(pair_count);
      const Rational fourth =
          Rational(3) + Rational(12) * Rational(static_cast<long>(size) * size - 3 * size + 3,
                                                static_cast<long>(size) * (size - 1));
      const Rational third = Rational(2 * (size - 2), long(root));
      row.criterion = fourth - Rational(6) * third + Rational(3);
      const Rational alpha(size - 2 - root, pair_count);
      const Rational beta(1 + root, pair_count);
      const Rational n(size);
      row.var_h = Rational(2) * n * n * alpha * alpha + Rational(2) * n * beta * beta +
                  Rational(4) * n * alpha * beta;
      row.slack = row.criterion - Rational(3, 4) * row.var_h;
      const OuModel model(size);
      const EmpiricalDistance e = sample_distance(
          sample(model, diagonal_pair_sum(model, size), c.samples, seed),
          1.0 / std::sqrt(double(pair_count)), DistanceTarget::gamma(Rational(1)), seed);
      row.emp_distance = e.estimate;
      row.mc_error = e.error_proxy;
      break;
    }
    case ChaosFamily::square_sum: {
      row.criterion = Rational(0);
      row.var_h = Rational(0);
      row.slack = Rational(0);
      const OuModel model(size);
      const EmpiricalDistance e = sample_distance(
          sample(model, square_sum_poly(model, size), c.samples, seed), 1.0,
          DistanceTarget::gamma(Rational(size, 2)), seed);
      row.emp_distance = e.estimate;
      row.mc_error = e.error_proxy;
      break;
    }
    case ChaosFamily::paired_product: {
      row.criterion = Rational(6) + Rational(6, size);
      row.var_h = Rational(4) + Rational(4, size);
      row.slack = Rational(3) + Rational(3, size);
      const OuModel model(2 * size);
      const EmpiricalDistance e =
          sample_distance(sample(model, paired_poly(model, size), c.samples, seed),
                          1.0 / std::sqrt(double(size)), DistanceTarget::gamma(Rational(1)),
                          seed);
      row.emp_distance = e.estimate;
      row.mc_error = e.error_proxy;
      break;
    }
    case ChaosFamily::random_family: {
      const OuModel model(size);
      const ChaosSpec spec = random_chaos(ModelTag::ou, size, c.degree, seed);
      const auto chaos = materialize_chaos(spec, model);
      const ReportContext ctx{"ou", size, c.degree, seed};
      const VerificationReport report =
          verify_gamma_target_fourth_moment(chaos.function, c.degree, chaos.norm2, ctx);
      row.criterion = report.rhs;
      row.slack = report.residual;
      row.pass = report.pass;
      const PolyFunction h = carre_du_champ(chaos.function, chaos.function) -
                             Rational(c.degree) * chaos.function;
      row.var_h = function_variance(h);
      const EmpiricalDistance e =
          sample_distance(sample(model, chaos.function, c.samples, seed), 1.0,
                          DistanceTarget::gamma(chaos.norm2), seed);
      row.emp_distance = e.estimate;
      row.mc_error = e.error_proxy;
      break;
    }
  }
  row.pass = row.pass && row.slack.sign() >= 0;
  return row;
}

}  // namespace

int run_verify(const ExperimentConfig& c, std::ostream& out) {
  out << verification_csv_header() << '\n';
  std::vector<std::function<BatchResult()>> jobs;
  const Spectrum s = c.spectrum;
  if (!s.is_rule_naturals()) {
    const int k = c.degree;
    const int n_max = c.n_max;
    jobs.push_back([s, k, n_max] { return spectral_point(s, k, n_max); });
    return emit_batches(std::move(jobs), c.threads, out) ? 0 : 1;
  }
  for (const ModelTag tag : c.models) {
    const std::vector<int>& dims = tag == ModelTag::cube ? c.cube_dims : c.ou_dims;
    const int kmax = tag == ModelTag::cube ? c.cube_kmax : c.ou_kmax;
    for (const int N : dims) {
      const std::uint64_t point_seed =
          mix_seed(mix_seed(c.seed, std::uint64_t(tag) + 1), std::uint64_t(N));
      const int seeds = c.seeds;
      if (tag == ModelTag::cube)
        jobs.push_back([s, tag, N, kmax, seeds, point_seed] {
          return battery_point<CubeModel>(s, tag, N, kmax, seeds, point_seed);
        });
      else
        jobs.push_back([s, tag, N, kmax, seeds, point_seed] {
          return battery_point<OuModel>(s, tag, N, kmax, seeds, point_seed);
        });
    }
  }
  int spectral_kmax = 0;
  for (const ModelTag tag : c.models)
    spectral_kmax = std::max(spectral_kmax,
                             tag == ModelTag::cube ? c.cube_kmax : c.ou_kmax);
  for (int k = 1; k <= spectral_kmax; ++k) {
    const int n_max = c.n_max;
    jobs.push_back([s, k, n_max] { return spectral_point(s, k, n_max); });
  }
  return emit_batches(std::move(jobs), c.threads, out) ? 0 : 1;
}

int run_normal_convergence(const ExperimentConfig& c, std::ostream& out) {
  out << "N,fourth_moment,var_gamma,stein_bound,emp_distance,mc_error\n";
  std::vector<std::function<BatchResult()>> jobs;
  for (const int size : c.dims)
    jobs.push_back([&c, size] {
      return BatchResult{normal_row_csv(normal_point(c, size)), true};
    });
  return emit_batches(std::move(jobs), c.threads, out) ? 0 : 1;
}

int run_gamma_convergence(const ExperimentConfig& c, std::ostream& out) {
  out << "N,criterion,var_h,slack,emp_distance,mc_error\n";
  std::vector<std::function<BatchResult()>> jobs;
  for (const int size : c.dims)
    jobs.push_back([&c, size] {
      const GammaRow row = gamma_point(c, size);
      return BatchResult{gamma_row_csv(row), row.pass};
    });
  return emit_batches(std::move(jobs), c.threads, out) ? 0 : 1;
}

int run_spectral_check(const ExperimentConfig& c, std::ostream& out) {
  const SpectralConditionReport report =
      check_spectral_condition(c.spectrum, c.degree, c.n_max);
  out << "n,lambda,value,ok\n";
  for (const auto& [n, value] : report.values)
    out << n << ',' << c.spectrum.eigenvalue(n) << ',' << value << ','
        << (value.sign() <= 0 ? 1 : 0) << '\n';
  return report.holds ? 0 : 1;
}

int run_experiment(const ExperimentConfig& c, std::ostream& out) {
  switch (c.kind) {
    case ExperimentKind::verify: return run_verify(c, out);
    case ExperimentKind::normal_convergence: return run_normal_convergence(c, out);
    case ExperimentKind::gamma_convergence: return run_gamma_convergence(c, out);
    case ExperimentKind::spectral_check: return run_spectral_check(c, out);
  }
  throw std::logic_error("experiments: bad kind");
}

}  // namespace chaoslab

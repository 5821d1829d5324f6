#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "optrec/envelopes.hpp"
#include "optrec/errors.hpp"

namespace optrec {

/// Malformed or inconsistent configuration (exit code 1).
class ConfigError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

enum class Mode { Envelope, EstimateMax, EstimateFn, Design, Bounds, Verify };
enum class Format { Csv, Json };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view name);
std::string_view to_string(Format format);
Format parse_format(std::string_view name);

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInadmissible = 2;
inline constexpr int kExitVerifyFailed = 3;

struct DesignSpec {
  std::vector<Eigen::Index> d_list{1, 2};
  std::vector<Eigen::Index> N_list{1, 2, 3, 4};
  double eps{0};
};

struct ExperimentConfig {
  Mode mode{Mode::Verify};
  std::optional<SampleSet<>> samples;
  double alpha{1};
  Metric metric{Metric::LInf};
  Eigen::Index grid{0};  // per-axis resolution; 0 picks a default for the dimension
  double p{1};           // infinity for the sup norm
  std::size_t trials{500};
  std::uint64_t seed{0};
  std::string out;  // empty: standard output
  std::optional<Format> format;
  DesignSpec design;
  std::optional<double> delta;
  double quad_tol{1e-4};

  Format output_format() const;
  Eigen::Index grid_for(Eigen::Index dim) const;
};

/// Parses a JSON configuration. Relative `samples_file` paths resolve against
/// `base_dir`. Throws ConfigError.
ExperimentConfig parse_config(std::string_view json_text, const std::string& base_dir = ".");
ExperimentConfig load_config(const std::string& path);

/// Sample set from inline JSON-like arrays: sites as columns of `x`.
SampleSet<> inline_samples(const PointSet<>& x, const Vector<>& y, const Vector<>& eps, double alpha, Metric metric);

struct ExperimentResult {
  std::string text;
  int status{kExitOk};
};

/// Runs the mode named in `cfg` and returns its rendered output. Throws
/// ArgumentError / InadmissibleError on bad input.
ExperimentResult execute(const ExperimentConfig& cfg);

/// execute() plus file output and exit-code mapping: 0 success, 1 usage or
/// configuration error, 2 inadmissible data, 3 failed verify checks.
int run_experiment(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);

struct CheckResult {
  std::string name;
  bool passed{true};
  double worst_margin{0};  // nonnegative iff the check holds
  std::size_t cases{0};
};

/// Deterministic invariant checks driven by `seed`; `trials` consistent
/// functions are drawn per instance in the worst-case error checks.
std::vector<CheckResult> run_verify(std::uint64_t seed, std::size_t trials);

std::string render_verify(const std::vector<CheckResult>& checks, std::uint64_t seed, std::size_t trials, Format format);

}  // namespace optrec

#include <iostream>

#include <CLI11.hpp>

#include "optrec/experiment.hpp"
#include "optrec/io.hpp"

namespace {

struct Options {
  std::string config;
  std::string out;
  std::string format;
  std::string samples;
  std::string metric;
  std::string p;
  std::optional<std::uint64_t> seed;
  std::optional<long long> grid;
  std::optional<long long> trials;
  std::optional<double> alpha;
  std::optional<double> delta;
  std::optional<double> quad_tol;
};

void add_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config, "JSON experiment configuration")->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out, "output file (default: standard output)");
  cmd->add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--seed", o.seed, "random seed");
  cmd->add_option("--grid", o.grid, "per-axis grid resolution")->check(CLI::PositiveNumber);
  cmd->add_option("--trials", o.trials, "number of trials")->check(CLI::PositiveNumber);
  cmd->add_option("--samples", o.samples, "sample CSV with header x_1,...,x_d,y,eps")->check(CLI::ExistingFile);
  cmd->add_option("--alpha", o.alpha, "Hölder exponent in (0, 1]");
  cmd->add_option("--metric", o.metric, "norm of the domain")->check(CLI::IsMember({"l1", "l2", "linf"}));
  cmd->add_option("--p", o.p, "Lebesgue exponent (number >= 1 or inf)");
  cmd->add_option("--delta", o.delta, "jitter radius for bounds");
  cmd->add_option("--quad-tol", o.quad_tol, "quadrature tolerance");
}

optrec::ExperimentConfig build_config(optrec::Mode mode, const Options& o) {
  using namespace optrec;
  ExperimentConfig cfg;
  if (!o.config.empty()) cfg = load_config(o.config);
  // The subcommand names the mode; a mode key in the config is ignored.
  cfg.mode = mode;
  if (!o.out.empty()) cfg.out = o.out;
  if (!o.format.empty()) cfg.format = parse_format(o.format);
  if (o.seed) cfg.seed = *o.seed;
  if (o.grid) cfg.grid = Eigen::Index(*o.grid);
  if (o.trials) cfg.trials = std::size_t(*o.trials);
  if (o.delta) cfg.delta = *o.delta;
  if (o.quad_tol) cfg.quad_tol = *o.quad_tol;
  if (!o.p.empty()) cfg.p = parse_number(o.p);
  const bool reshape = o.alpha || !o.metric.empty();
  if (o.alpha) cfg.alpha = *o.alpha;
  if (!o.metric.empty()) cfg.metric = parse_metric(o.metric);
  if (!o.samples.empty()) {
    cfg.samples = read_samples_csv_file(o.samples, cfg.alpha, cfg.metric);
  } else if (reshape && cfg.samples) {
    const auto& s = *cfg.samples;
    cfg.samples = SampleSet<>(s.sites(), s.values(), s.eps(), cfg.alpha, Domain(cfg.metric, s.dim()));
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal recovery of Hölder functions from inexact samples"};
  app.require_subcommand(1);
  const std::vector<std::pair<optrec::Mode, std::string>> modes = {
      {optrec::Mode::Envelope, "lower/upper envelopes and fill function on a grid"},
      {optrec::Mode::EstimateMax, "local and global estimates of the maximum"},
      {optrec::Mode::EstimateFn, "local and global function recovery on a grid"},
      {optrec::Mode::Design, "design table for grid designs on the cube"},
      {optrec::Mode::Bounds, "error bounds for a given site set"},
      {optrec::Mode::Verify, "deterministic invariant checks"},
  };
  Options options;
  std::vector<std::pair<optrec::Mode, CLI::App*>> commands;
  for (const auto& [mode, help] : modes) {
    auto* cmd = app.add_subcommand(std::string(optrec::to_string(mode)), help);
    add_options(cmd, options);
    commands.emplace_back(mode, cmd);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return optrec::kExitUsage;
  }
  optrec::Mode mode = optrec::Mode::Verify;
  for (const auto& [m, cmd] : commands) {
    if (cmd->parsed()) mode = m;
  }
  optrec::ExperimentConfig cfg;
  try {
    cfg = build_config(mode, options);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return optrec::kExitUsage;
  }
  return optrec::run_experiment(cfg, std::cout, std::cerr);
}

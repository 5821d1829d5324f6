#include "optrec/experiment.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "optrec/design.hpp"
#include "optrec/estimators.hpp"
#include "optrec/io.hpp"

namespace optrec {

using ojson = nlohmann::ordered_json;

namespace {

const SampleSet<>& require_samples(const ExperimentConfig& cfg) {
  if (!cfg.samples) {
    throw ConfigError("mode '" + std::string(to_string(cfg.mode)) + "' needs a sample set (samples or samples_file)");
  }
  return *cfg.samples;
}

std::vector<std::string> coordinate_header(Eigen::Index d) {
  std::vector<std::string> h;
  for (Eigen::Index i = 0; i < d; ++i) h.push_back("x_" + std::to_string(i + 1));
  return h;
}

// Non-finite values have no JSON representation; they are written as strings.
ojson num(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

ojson pair(const Interval<>& v) { return ojson::array({num(v.lo), num(v.hi)}); }

std::string render_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows,
                         Format format) {
  if (format == Format::Csv) {
    std::string out = csv_line(header);
    for (const auto& r : rows) out += csv_line(r);
    return out;
  }
  ojson j;
  j["columns"] = header;
  ojson body = ojson::array();
  for (const auto& r : rows) {
    ojson row = ojson::array();
    for (const auto& field : r) {
      try {
        row.push_back(num(parse_number(field)));
      } catch (const ArgumentError&) {
        row.push_back(field);
      }
    }
    body.push_back(std::move(row));
  }
  j["rows"] = std::move(body);
  return j.dump(2) + "\n";
}

std::string render_envelope(const ExperimentConfig& cfg) {
  const auto& s = require_samples(cfg);
  require_admissible(s);
  const auto grid = make_grid(s.domain(), cfg.grid_for(s.dim()));
  auto header = coordinate_header(s.dim());
  header.insert(header.end(), {"lower", "upper", "fill"});
  std::vector<std::vector<std::string>> rows;
  rows.reserve(std::size_t(grid.size()));
  for (Eigen::Index j = 0; j < grid.size(); ++j) {
    const auto x = grid.points.col(j);
    const auto env = evaluate_envelopes(s, x);
    std::vector<std::string> row;
    for (Eigen::Index i = 0; i < s.dim(); ++i) row.push_back(format_number(x(i)));
    row.push_back(format_number(env.lower));
    row.push_back(format_number(env.upper));
    row.push_back(format_number(env.fill));
    rows.push_back(std::move(row));
  }
  return render_table(header, rows, cfg.output_format());
}

ojson report_json(const EstimateReport<>& r) {
  ojson j;
  j["kind"] = to_string(r.kind);
  j["value"] = num(r.point());
  j["radius"] = num(r.radius.hi);
  j["exact"] = r.exact();
  j["value_bracket"] = pair(r.value);
  j["radius_bracket"] = pair(r.radius);
  j["certified_error"] = num(r.certified_error());
  return j;
}

std::vector<std::string> report_row(const EstimateReport<>& r) {
  return {std::string(to_string(r.kind)), format_number(r.point()),       format_number(r.value.lo),
          format_number(r.value.hi),      format_number(r.radius.lo),     format_number(r.radius.hi),
          r.exact() ? "true" : "false"};
}

std::string render_estimate_max(const ExperimentConfig& cfg) {
  const auto& s = require_samples(cfg);
  require_admissible(s);
  const auto grid = make_grid(s.domain(), cfg.grid_for(s.dim()));
  const auto local = local_max_estimate(s, grid);
  const auto global = s.common_eps() ? global_max_estimate(s, grid) : general_max_estimate(s, grid);
  const Interval<> lower = Interval<>::point(max_lower_exact(s));
  const Interval<> upper = max_upper_bracket(s, grid);
  const Interval<> fill = max_fill_bracket(s, grid);
  const Interval<> zero = max_zero_data_bracket(s, grid);

  if (cfg.output_format() == Format::Csv) {
    std::string out = csv_line({"estimator", "value", "value_lo", "value_hi", "radius_lo", "radius_hi", "exact"});
    out += csv_line(report_row(local));
    out += csv_line(report_row(global));
    return out;
  }
  ojson j;
  j["local"] = report_json(local);
  j["global"] = report_json(global);
  ojson b;
  b["max_lower"] = pair(lower);
  b["max_upper"] = pair(upper);
  b["max_fill"] = pair(fill);
  b["max_zero_data"] = pair(zero);
  j["brackets"] = std::move(b);
  j["grid"] = {{"n", cfg.grid_for(s.dim())}, {"mesh", num(grid.mesh)}, {"points", grid.size()}};
  return j.dump(2) + "\n";
}

std::string render_estimate_fn(const ExperimentConfig& cfg) {
  const auto& s = require_samples(cfg);
  require_admissible(s);
  const auto grid = make_grid(s.domain(), cfg.grid_for(s.dim()));
  auto header = coordinate_header(s.dim());
  header.insert(header.end(), {"local_value", "local_halfwidth", "global_value", "certificate", "cell"});
  std::vector<std::vector<std::string>> rows;
  rows.reserve(std::size_t(grid.size()));
  for (Eigen::Index j = 0; j < grid.size(); ++j) {
    const auto x = grid.points.col(j);
    const auto loc = local_function_estimate(s, x);
    const auto glo = global_function_estimate(s, x);
    std::vector<std::string> row;
    for (Eigen::Index i = 0; i < s.dim(); ++i) row.push_back(format_number(x(i)));
    row.push_back(format_number(loc.value));
    row.push_back(format_number(loc.halfwidth));
    row.push_back(format_number(glo.value));
    row.push_back(format_number(glo.certificate));
    row.push_back(std::to_string(glo.cell + 1));
    rows.push_back(std::move(row));
  }
  return render_table(header, rows, cfg.output_format());
}

std::string render_design(const ExperimentConfig& cfg) {
  const std::vector<std::string> header = {"d",     "N",          "M",          "p",          "lower_bound",
                                           "lp_lo", "lp_hi",      "cube_value", "cube_exact", "upper_bound"};
  std::vector<std::vector<std::string>> rows;
  for (const auto d : cfg.design.d_list) {
    for (const auto N : cfg.design.N_list) {
      const auto r = design_report(d, N, cfg.alpha, cfg.p, cfg.design.eps, cfg.quad_tol);
      rows.push_back({std::to_string(d), std::to_string(N), std::to_string(r.M), format_number(cfg.p),
                      format_number(r.lower), format_number(r.lp.value.lo), format_number(r.lp.value.hi),
                      r.cube ? format_number(r.cube->value) : "", r.cube ? (r.cube->exact ? "true" : "false") : "",
                      format_number(r.upper)});
    }
  }
  return render_table(header, rows, cfg.output_format());
}

std::string render_bounds(const ExperimentConfig& cfg) {
  const auto& s = require_samples(cfg);
  require_admissible(s);
  const Eigen::Index d = s.dim();
  const Eigen::Index M = s.size();
  const auto grid = make_grid(s.domain(), cfg.grid_for(d));
  const auto b = two_sided_bounds(d, s.alpha(), M, s.eps());
  const auto lp = lp_norm_u_refined(s, cfg.p, cfg.quad_tol);
  const Interval<> fill = max_fill_bracket(s, grid);

  ojson j;
  j["d"] = d;
  j["M"] = M;
  j["alpha"] = num(s.alpha());
  j["p"] = num(cfg.p);
  j["lower_bound"] = num(b.lower);
  j["upper_bound"] = num(b.upper);
  j["lp_norm"] = {{"bracket", pair(lp.value)},
                  {"error_estimate", num(lp.error_estimate)},
                  {"resolution", lp.resolution},
                  {"converged", lp.converged}};
  if (std::isfinite(cfg.p) && s.metric() == Metric::LInf && s.common_eps()) {
    const auto c = cube_optimal_lp(d, s.alpha(), cfg.p, M, s.eps()(0));
    j["cube_value"] = {{"value", num(c.value)}, {"exact", c.exact}};
  }
  j["max_fill"] = pair(fill);
  if (s.common_eps()) {
    const double delta = cfg.delta.value_or(2.0 / std::pow(double(M), 1.0 / double(d)));
    const auto jb = jitter_bounds(fill, s.eps()(0), delta, d, M, s.alpha());
    ojson jj;
    jj["delta"] = num(delta);
    jj["lower"] = pair(jb.lower);
    jj["upper"] = pair(jb.upper);
    jj["packing_ok"] = jb.packing_ok;
    jj["fill_premise_ok"] = jb.fill_premise_ok;
    jj["near_optimal"] = jb.near_optimal ? ojson(*jb.near_optimal) : ojson(nullptr);
    jj["ratio"] = num(jb.ratio);
    j["jitter"] = std::move(jj);
  }
  if (cfg.output_format() == Format::Json) return j.dump(2) + "\n";

  std::string out = csv_line({"quantity", "lo", "hi"});
  out += csv_line({"lower_bound", format_number(b.lower), format_number(b.lower)});
  out += csv_line({"lp_norm", format_number(lp.value.lo), format_number(lp.value.hi)});
  out += csv_line({"upper_bound", format_number(b.upper), format_number(b.upper)});
  out += csv_line({"max_fill", format_number(fill.lo), format_number(fill.hi)});
  return out;
}

}  // namespace

ExperimentResult execute(const ExperimentConfig& cfg) {
  switch (cfg.mode) {
    case Mode::Envelope: return {render_envelope(cfg), kExitOk};
    case Mode::EstimateMax: return {render_estimate_max(cfg), kExitOk};
    case Mode::EstimateFn: return {render_estimate_fn(cfg), kExitOk};
    case Mode::Design: return {render_design(cfg), kExitOk};
    case Mode::Bounds: return {render_bounds(cfg), kExitOk};
    case Mode::Verify: {
      const auto checks = run_verify(cfg.seed, cfg.trials);
      bool ok = true;
      for (const auto& c : checks) ok = ok && c.passed;
      return {render_verify(checks, cfg.seed, cfg.trials, cfg.output_format()), ok ? kExitOk : kExitVerifyFailed};
    }
  }
  throw ConfigError("unknown mode");
}

int run_experiment(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  ExperimentResult result;
  try {
    result = execute(cfg);
  } catch (const InadmissibleError& e) {
    err << "error: inadmissible data: " << e.what() << '\n';
    return kExitInadmissible;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  if (cfg.out.empty()) {
    out << result.text;
  } else {
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file) {
      err << "error: cannot write '" << cfg.out << "'\n";
      return kExitUsage;
    }
    file << result.text;
  }
  if (result.status == kExitVerifyFailed) err << "error: verify checks failed\n";
  return result.status;
}

}  // namespace optrec

#include <optrec/consistent.hpp>
#include <optrec/experiment.hpp>
#include <optrec/io.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "test_support.hpp"

using namespace optrec;
using namespace optrec::testing;
using nlohmann::json;

namespace {

ExperimentConfig config_for(Mode mode, const SampleSet<>& s, Eigen::Index grid = 200) {
  ExperimentConfig cfg;
  cfg.mode = mode;
  cfg.samples = s;
  cfg.alpha = s.alpha();
  cfg.metric = s.metric();
  cfg.grid = grid;
  return cfg;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::filesystem::path scratch_dir() {
  auto dir = std::filesystem::temp_directory_path() / "optrec_harness_test";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Format, SeventeenDigits) {
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(format_number(0.5), "0.5");
  EXPECT_EQ(format_number(-2.0), "-2");
  EXPECT_EQ(format_number(0.0), "0");
  EXPECT_EQ(format_number(1e-20), "9.9999999999999995e-21");
  EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "inf");
}

TEST(Format, RoundTrips) {
  Rng rng(61);
  for (int k = 0; k < 2000; ++k) {
    const double v = std::ldexp(rng.uniform(-1, 1), int(rng.integer(-60, 60)));
    EXPECT_EQ(parse_number(format_number(v)), v);
  }
  EXPECT_TRUE(std::isinf(parse_number("inf")));
  EXPECT_THROW(parse_number("1.5x"), ArgumentError);
  EXPECT_THROW(parse_number(""), ArgumentError);
  EXPECT_EQ(parse_number(" +2.5 "), 2.5);
}

TEST(SampleCsv, ReadsAndRoundTrips) {
  std::istringstream in("x_1,x_2,y,eps\n0.1,-0.2,0.3,0.05\n0.5,0.5,-1,0\n");
  const auto s = read_samples_csv(in, 0.5, Metric::L2);
  EXPECT_EQ(s.dim(), 2);
  EXPECT_EQ(s.size(), 2);
  EXPECT_DOUBLE_EQ(s.sites()(1, 0), -0.2);
  EXPECT_DOUBLE_EQ(s.eps()(0), 0.05);
  EXPECT_EQ(s.alpha(), 0.5);
  std::ostringstream out;
  write_samples_csv(out, s);
  std::istringstream again(out.str());
  const auto t = read_samples_csv(again, 0.5, Metric::L2);
  EXPECT_EQ(t.sites(), s.sites());
  EXPECT_EQ(t.values(), s.values());
  EXPECT_EQ(t.eps(), s.eps());
}

TEST(SampleCsv, RejectsMalformedInput) {
  auto read = [](const std::string& text) {
    std::istringstream in(text);
    return read_samples_csv(in, 1.0, Metric::LInf);
  };
  EXPECT_THROW(read(""), ArgumentError);
  EXPECT_THROW(read("x,y,eps\n0,0,0\n"), ArgumentError);
  EXPECT_THROW(read("x_1,y,eps\n"), ArgumentError);
  EXPECT_THROW(read("x_1,y,eps\n0,0\n"), ArgumentError);
  EXPECT_THROW(read("x_1,y,eps\n0,zero,0\n"), ArgumentError);
  EXPECT_THROW(read("x_1,y,eps\n2,0,0\n"), ArgumentError);
  EXPECT_NO_THROW(read("x_1,y,eps\r\n0,0,0\r\n\n"));
}

TEST(Config, ParsesInlineSamples) {
  const auto cfg = parse_config(R"({"mode": "estimate-max", "alpha": 0.5, "metric": "l2",
    "samples": {"sites": [[0, 0.5], [-0.3, 0.1]], "values": [1, 2], "eps": 0.1},
    "grid": 50, "p": "inf", "trials": 20, "seed": 9, "format": "json"})");
  EXPECT_EQ(cfg.mode, Mode::EstimateMax);
  ASSERT_TRUE(cfg.samples.has_value());
  EXPECT_EQ(cfg.samples->dim(), 2);
  EXPECT_EQ(cfg.samples->size(), 2);
  EXPECT_EQ(cfg.samples->alpha(), 0.5);
  EXPECT_EQ(cfg.samples->metric(), Metric::L2);
  EXPECT_TRUE(cfg.samples->common_eps());
  EXPECT_TRUE(std::isinf(cfg.p));
  EXPECT_EQ(cfg.grid, 50);
  EXPECT_EQ(cfg.trials, 20u);
  EXPECT_EQ(cfg.seed, 9u);
  EXPECT_EQ(cfg.output_format(), Format::Json);

  const auto one = parse_config(R"({"samples": {"sites": [-0.5, 0.5], "values": [0, 0], "eps": [0, 0.2]}})");
  EXPECT_EQ(one.samples->dim(), 1);
  EXPECT_FALSE(one.samples->common_eps());
  EXPECT_EQ(one.mode, Mode::Verify);
}

TEST(Config, RejectsInvalidConfigs) {
  EXPECT_THROW(parse_config("{"), ConfigError);
  EXPECT_THROW(parse_config("[]"), ConfigError);
  EXPECT_THROW(parse_config(R"({"bogus": 1})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"mode": "nope"})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"grid": 0})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"grid": 1.5})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"metric": "l3"})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"samples": {"sites": [0], "values": [0, 1]}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"samples": {"sites": [[0, 0], [1]], "values": [0, 1]}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"samples": {"sites": [3], "values": [0]}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"samples": {"sites": [0], "values": [0]}, "alpha": 2})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"samples_file": "missing.csv"})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"design": {"d": []}})"), ConfigError);
}

TEST(Config, ResolvesSampleFileRelativeToConfig) {
  const auto dir = scratch_dir();
  {
    std::ofstream csv(dir / "s.csv");
    csv << "x_1,y,eps\n-0.5,0,0\n0.5,0,0\n";
    std::ofstream cfg(dir / "c.json");
    cfg << R"({"mode": "envelope", "samples_file": "s.csv", "grid": 4})";
  }
  const auto cfg = load_config((dir / "c.json").string());
  ASSERT_TRUE(cfg.samples.has_value());
  EXPECT_EQ(cfg.samples->size(), 2);
  EXPECT_THROW(load_config((dir / "absent.json").string()), ConfigError);
}

TEST(Generator, DegenerateClampsReproduceEnvelopes) {
  Rng rng(62);
  for (int t = 0; t < 20; ++t) {
    const auto s = random_instance(rng, 1 + t % 2, 1 + t % 5, t % 2 ? 0.5 : 1.0, Metric::L2, 0.2, false);
    const auto up = generate_consistent_function(s, 0, rng, Clamp::Upper);
    const auto lo = generate_consistent_function(s, 0, rng, Clamp::Lower);
    for (int q = 0; q < 50; ++q) {
      const Point<> x = random_domain_point(s.domain(), rng);
      EXPECT_NEAR(up(x), eval_upper(s, x), 1e-12);
      EXPECT_NEAR(lo(x), eval_lower(s, x), 1e-12);
    }
  }
}

TEST(Generator, TwoSiteFunctionsAreConsistent) {
  const auto s = univariate({-0.5, 0.5}, {0, 0.4}, {0.1, 0.05});
  const auto grid = make_grid(Domain::cube(1), 200);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng(seed);
    const auto f = generate_consistent_function(s, 5, rng);
    Vector<> v(grid.size());
    for (Eigen::Index j = 0; j < grid.size(); ++j) v(j) = f(grid.points.col(j));
    EXPECT_TRUE(check_holder(grid.points, v, 1.0, Metric::LInf));
    for (Eigen::Index m = 0; m < s.size(); ++m) EXPECT_LE(std::abs(f(s.site(m)) - s.values()(m)), s.eps()(m) + 1e-12);
  }
  const auto bad = univariate({0, 1}, {0, 1.5}, {0, 0});
  Rng rng(1);
  EXPECT_THROW(generate_consistent_function(bad, 2, rng), InadmissibleError);
}

TEST(Generator, MixturesStayConsistent) {
  const auto s = univariate({-0.6, 0.1, 0.7}, {0.2, -0.1, 0.3}, {0.05, 0.0, 0.1});
  const auto grid = make_grid(Domain::cube(1), 300);
  for (double t : {0.0, 0.25, 0.5, 1.0}) {
    const EnvelopeMixture<> f(s, t);
    Vector<> v(grid.size());
    for (Eigen::Index j = 0; j < grid.size(); ++j) v(j) = f(grid.points.col(j));
    EXPECT_TRUE(check_holder(grid.points, v, 1.0, Metric::LInf));
    for (Eigen::Index m = 0; m < s.size(); ++m) EXPECT_LE(std::abs(f(s.site(m)) - s.values()(m)), s.eps()(m) + 1e-12);
  }
  EXPECT_THROW(EnvelopeMixture<>(s, 1.5), ArgumentError);
}

TEST(Rng, SplitStreamsAreDeterministic) {
  const Rng root(7);
  Rng a = root.split(3), b = root.split(3), c = root.split(4);
  for (int k = 0; k < 100; ++k) {
    const double va = a.uniform();
    EXPECT_EQ(va, b.uniform());
    EXPECT_GE(va, 0.0);
    EXPECT_LT(va, 1.0);
  }
  Rng a2 = root.split(3);
  EXPECT_NE(a2.bits(), c.bits());
}

TEST(Experiment, EnvelopeCsv) {
  const auto s = univariate({-0.5, 0.5}, {0, 0}, {0, 0});
  const auto res = execute(config_for(Mode::Envelope, s, 4));
  const auto lines = lines_of(res.text);
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_EQ(lines[0], "x_1,lower,upper,fill");
  // Cell centers -0.75, -0.25, 0.25, 0.75.
  EXPECT_EQ(lines[1], "-0.75,-0.25,0.25,0.25");
  EXPECT_EQ(lines[2], "-0.25,-0.25,0.25,0.25");
}

TEST(Experiment, EnvelopeJsonHasColumns) {
  PointSet<> x(2, 1);
  x << 0, 0;
  const SampleSet<> s(x, Vector<>::Zero(1), Vector<>::Zero(1), 1.0, Domain(Metric::L2, 2));
  auto cfg = config_for(Mode::Envelope, s, 6);
  cfg.format = Format::Json;
  const auto j = json::parse(execute(cfg).text);
  EXPECT_EQ(j["columns"], json({"x_1", "x_2", "lower", "upper", "fill"}));
  EXPECT_GT(j["rows"].size(), 0u);
  for (const auto& row : j["rows"]) EXPECT_EQ(row.size(), 5u);
}

TEST(Experiment, EstimateMaxJson) {
  const auto s = univariate({-0.5, 0.5}, {0, 0}, {0, 0});
  const auto j = json::parse(execute(config_for(Mode::EstimateMax, s, 1000)).text);
  EXPECT_DOUBLE_EQ(j["local"]["value"].get<double>(), 0.25);
  EXPECT_DOUBLE_EQ(j["local"]["radius"].get<double>(), 0.25);
  EXPECT_TRUE(j["local"]["exact"].get<bool>());
  EXPECT_DOUBLE_EQ(j["global"]["value"].get<double>(), 0.25);
  EXPECT_DOUBLE_EQ(j["global"]["radius"].get<double>(), 0.25);
  EXPECT_EQ(j["global"]["kind"], "global");
  EXPECT_DOUBLE_EQ(j["brackets"]["max_upper"][0].get<double>(), 0.5);
  EXPECT_DOUBLE_EQ(j["brackets"]["max_fill"][1].get<double>(), 0.5);

  const auto unequal = univariate({-0.5, 0.5}, {0, 0}, {0, 0.2});
  const auto g = json::parse(execute(config_for(Mode::EstimateMax, unequal, 1000)).text);
  EXPECT_EQ(g["global"]["kind"], "general_eps");
  EXPECT_FALSE(g["local"]["exact"].get<bool>());

  auto cfg = config_for(Mode::EstimateMax, s, 1000);
  cfg.format = Format::Csv;
  const auto lines = lines_of(execute(cfg).text);
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0], "estimator,value,value_lo,value_hi,radius_lo,radius_hi,exact");
  EXPECT_EQ(lines[1], "local,0.25,0.25,0.25,0.25,0.25,true");
}

TEST(Experiment, EstimateFnCsv) {
  const auto s = univariate({-0.5, 0.5}, {0.3, -0.2}, {0, 0});
  const auto lines = lines_of(execute(config_for(Mode::EstimateFn, s, 4)).text);
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_EQ(lines[0], "x_1,local_value,local_halfwidth,global_value,certificate,cell");
  EXPECT_EQ(lines[1].substr(lines[1].rfind(',') + 1), "1");
  EXPECT_EQ(lines[4].substr(lines[4].rfind(',') + 1), "2");
}

TEST(Experiment, DesignTable) {
  ExperimentConfig cfg;
  cfg.mode = Mode::Design;
  cfg.design.d_list = {1};
  cfg.design.N_list = {4};
  cfg.p = 1;
  auto lines = lines_of(execute(cfg).text);
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0], "d,N,M,p,lower_bound,lp_lo,lp_hi,cube_value,cube_exact,upper_bound");
  std::vector<std::string> f;
  std::stringstream row(lines[1]);
  for (std::string field; std::getline(row, field, ',');) f.push_back(field);
  ASSERT_EQ(f.size(), 10u);
  EXPECT_NEAR(parse_number(f[5]), 0.125, 1e-4);
  EXPECT_DOUBLE_EQ(parse_number(f[7]), 0.125);
  EXPECT_EQ(f[8], "true");
  EXPECT_LE(parse_number(f[4]), parse_number(f[5]));
  EXPECT_LE(parse_number(f[6]), parse_number(f[9]));

  cfg.design.d_list = {2};
  cfg.design.N_list = {2};
  cfg.p = std::numeric_limits<double>::infinity();
  cfg.format = Format::Json;
  const auto j = json::parse(execute(cfg).text);
  const auto& r = j["rows"][0];
  EXPECT_LE(r[5].get<double>(), 0.5);
  EXPECT_GE(r[6].get<double>(), 0.5);
  EXPECT_EQ(r[7], "");
}

TEST(Experiment, BoundsJson) {
  const auto s = univariate({-0.5, 0.5}, {0, 0}, {0, 0});
  auto cfg = config_for(Mode::Bounds, s, 1000);
  const auto j = json::parse(execute(cfg).text);
  EXPECT_EQ(j["M"], 2);
  EXPECT_DOUBLE_EQ(j["lower_bound"].get<double>(), 0.25);
  EXPECT_DOUBLE_EQ(j["upper_bound"].get<double>(), 1.5);
  EXPECT_NEAR(j["lp_norm"]["bracket"][0].get<double>(), 0.25, 1e-4);
  EXPECT_DOUBLE_EQ(j["cube_value"]["value"].get<double>(), 0.25);
  EXPECT_DOUBLE_EQ(j["jitter"]["delta"].get<double>(), 1.0);
  EXPECT_DOUBLE_EQ(j["jitter"]["ratio"].get<double>(), 5.0);
  EXPECT_TRUE(j["jitter"]["near_optimal"].get<bool>());
}

TEST(Experiment, ExitCodes) {
  const auto bad = univariate({0, 1}, {0, 1.5}, {0, 0});
  for (Mode mode : {Mode::Envelope, Mode::EstimateMax, Mode::EstimateFn, Mode::Bounds}) {
    std::ostringstream out, err;
    EXPECT_EQ(run_experiment(config_for(mode, bad, 10), out, err), kExitInadmissible) << to_string(mode);
    EXPECT_NE(err.str().find("inadmissible"), std::string::npos);
    EXPECT_TRUE(out.str().empty());
  }
  ExperimentConfig missing;
  missing.mode = Mode::EstimateMax;
  std::ostringstream out, err;
  EXPECT_EQ(run_experiment(missing, out, err), kExitUsage);
  EXPECT_NE(err.str().find("sample set"), std::string::npos);

  ExperimentConfig bad_p;
  bad_p.mode = Mode::Design;
  bad_p.p = 0.5;
  EXPECT_EQ(run_experiment(bad_p, out, err), kExitUsage);
}

TEST(Experiment, WritesOutputFile) {
  const auto path = scratch_dir() / "env.csv";
  std::filesystem::remove(path);
  auto cfg = config_for(Mode::Envelope, univariate({0}, {0}, {0}), 3);
  cfg.out = path.string();
  std::ostringstream out, err;
  ASSERT_EQ(run_experiment(cfg, out, err), kExitOk);
  EXPECT_TRUE(out.str().empty());
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  EXPECT_EQ(buf.str(), execute(cfg).text);
}

TEST(Verify, PassesAndIsDeterministic) {
  const auto a = run_verify(3, 40);
  const auto b = run_verify(3, 40);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_TRUE(a[k].passed) << a[k].name << " margin " << a[k].worst_margin;
    EXPECT_GT(a[k].cases, 0u);
    EXPECT_EQ(a[k].worst_margin, b[k].worst_margin);
  }
  const auto text = render_verify(a, 3, 40, Format::Csv);
  EXPECT_EQ(text, render_verify(b, 3, 40, Format::Csv));
  EXPECT_NE(text.find("summary,PASS"), std::string::npos);
  EXPECT_TRUE(json::parse(render_verify(a, 3, 40, Format::Json)).is_object());
}

#include <algorithm>
#include <functional>

#include <json.hpp>

#include "optrec/consistent.hpp"
#include "optrec/design.hpp"
#include "optrec/estimators.hpp"
#include "optrec/experiment.hpp"
#include "optrec/io.hpp"

namespace optrec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Tracker {
  double margin{kInf};
  std::size_t cases{0};
  void add(double m) {
    margin = std::min(margin, m);
    ++cases;
  }
};

Metric metric_of(std::uint64_t k) {
  switch (k % 3) {
    case 0: return Metric::LInf;
    case 1: return Metric::L2;
    default: return Metric::L1;
  }
}

// Admissible instance built from a random Hölder function sampled with noise.
SampleSet<> random_instance(Rng& rng, Eigen::Index d, Eigen::Index M, double alpha, Metric metric, double eps_max,
                            bool common) {
  const Domain dom(metric, d);
  const Eigen::Index K = 1 + Eigen::Index(rng.integer(0, 3));
  PointSet<> w(d, K);
  Vector<> v(K);
  for (Eigen::Index k = 0; k < K; ++k) {
    w.col(k) = random_domain_point(dom, rng);
    v(k) = rng.uniform(-1, 1);
  }
  const ConsistentFunction<> f(w, v, alpha, metric, ConsistentFunction<>::Form::UpperCones);
  PointSet<> x(d, M);
  Vector<> y(M), e(M);
  const double shared = rng.uniform(0, eps_max);
  for (Eigen::Index m = 0; m < M; ++m) {
    x.col(m) = random_domain_point(dom, rng);
    e(m) = common ? shared : rng.uniform(0, eps_max);
    y(m) = f(x.col(m)) + rng.uniform(-e(m), e(m));
  }
  return SampleSet<>(x, y, e, alpha, dom);
}

SampleSet<> univariate_exact(Rng& rng, Eigen::Index M) {
  std::vector<double> x;
  while (Eigen::Index(x.size()) < M) {
    const double t = rng.uniform(-0.999, 0.999);
    if (std::none_of(x.begin(), x.end(), [&](double s) { return std::abs(s - t) < 1e-3; })) x.push_back(t);
  }
  std::sort(x.begin(), x.end());
  PointSet<> sites(1, M);
  Vector<> y(M);
  for (Eigen::Index m = 0; m < M; ++m) {
    sites(0, m) = x[std::size_t(m)];
    y(m) = m == 0 ? rng.uniform(-1, 1) : y(m - 1) + rng.uniform(-1, 1) * (x[std::size_t(m)] - x[std::size_t(m) - 1]);
  }
  return SampleSet<>(sites, y, Vector<>::Zero(M), 1.0, Domain::cube(1));
}

Clamp clamp_of(std::size_t k) { return k % 4 == 0 ? Clamp::Upper : (k % 4 == 1 ? Clamp::Lower : Clamp::Random); }

CheckResult finish(std::string name, const Tracker& t, bool strict = false) {
  CheckResult r;
  r.name = std::move(name);
  r.worst_margin = t.margin;
  r.cases = t.cases;
  r.passed = t.cases > 0 && (strict ? t.margin > 0 : t.margin >= -1e-12);
  return r;
}

CheckResult check_sandwich(Rng rng, std::size_t) {
  Tracker t;
  for (int inst = 0; inst < 20; ++inst) {
    const auto s = random_instance(rng, 1 + inst % 3, 1 + inst % 6, inst % 2 ? 0.5 : 1.0, metric_of(inst), 0.2, false);
    for (std::size_t k = 0; k < 5; ++k) {
      const auto f = generate_consistent_function(s, 4, rng, clamp_of(k));
      for (int q = 0; q < 40; ++q) {
        const Point<> x = random_domain_point(s.domain(), rng);
        t.add(std::min(f(x) - eval_lower(s, x), eval_upper(s, x) - f(x)));
      }
    }
  }
  return finish("envelope_sandwich", t);
}

CheckResult check_data_consistency(Rng rng, std::size_t) {
  Tracker t;
  for (int inst = 0; inst < 50; ++inst) {
    const auto s = random_instance(rng, 1 + inst % 3, 1 + inst % 8, inst % 2 ? 0.5 : 1.0, metric_of(inst), 0.2, false);
    for (Eigen::Index m = 0; m < s.size(); ++m) {
      t.add(s.eps()(m) - std::abs(s.values()(m) - eval_lower(s, s.site(m))));
      t.add(s.eps()(m) - std::abs(s.values()(m) - eval_upper(s, s.site(m))));
    }
  }
  return finish("data_consistency", t);
}

CheckResult check_generator_holder(Rng rng, std::size_t) {
  Tracker t;
  for (int inst = 0; inst < 10; ++inst) {
    const double alpha = inst % 2 ? 0.5 : 1.0;
    const auto s = random_instance(rng, 1 + inst % 2, 2 + inst % 4, alpha, metric_of(inst), 0.2, false);
    const auto f = generate_consistent_function(s, 5, rng);
    PointSet<> pts(s.dim(), 200);
    Vector<> v(200);
    for (Eigen::Index j = 0; j < 200; ++j) {
      pts.col(j) = random_domain_point(s.domain(), rng);
      v(j) = f(pts.col(j));
    }
    for (Eigen::Index a = 0; a < 200; ++a) {
      for (Eigen::Index b = a + 1; b < 200; ++b) {
        t.add(dist_alpha(pts.col(a), pts.col(b), s.metric(), alpha) - std::abs(v(a) - v(b)));
      }
    }
    for (Eigen::Index m = 0; m < s.size(); ++m) t.add(s.eps()(m) - std::abs(f(s.site(m)) - s.values()(m)));
  }
  return finish("generator_holder", t);
}

CheckResult check_closed_forms(Rng rng, std::size_t) {
  Tracker t;
  const auto grid = make_grid(Domain::cube(1), 1000);
  for (int inst = 0; inst < 50; ++inst) {
    const auto s = univariate_exact(rng, 1 + inst % 8);
    const double exact = max_upper_univariate_exact(s);
    const auto cm = certified_max_envelope(s, Envelope::Upper, grid);
    t.add(std::min(exact - cm.lo, cm.hi - exact));
    const auto cl = certified_max_envelope(s, Envelope::Lower, grid);
    const double lower = max_lower_exact(s);
    t.add(std::min(lower - cl.lo, cl.hi - lower));
    const auto cf = certified_max_envelope(s, Envelope::Fill, grid);
    const double fill = max_fill_univariate_exact(s);
    t.add(std::min(fill - cf.lo, cf.hi - fill));
  }
  return finish("closed_form_maxima", t);
}

CheckResult check_gwce_local(Rng rng, std::size_t trials) {
  Tracker t;
  const auto fine = make_grid(Domain::cube(1), 20000);
  const auto coarse = make_grid(Domain::cube(1), 2000);
  for (int inst = 0; inst < 6; ++inst) {
    const auto s = random_instance(rng, 1, 2 + inst % 4, 1.0, Metric::LInf, inst % 2 ? 0.1 : 0.0, inst % 3 == 0);
    const auto r = local_max_estimate(s, fine);
    const auto rep = gwce_check<double>(
        [&](Rng& g, std::size_t k) { return generate_consistent_function(s, 3, g, clamp_of(k)); }, trials,
        rng.bits(), coarse, 1.0, r.value, r.radius);
    t.add(rep.worst_margin());
  }
  return finish("gwce_local", t);
}

CheckResult check_gwce_global(Rng rng, std::size_t trials) {
  Tracker t;
  const auto fine = make_grid(Domain::cube(1), 20000);
  const auto coarse = make_grid(Domain::cube(1), 2000);
  for (int inst = 0; inst < 6; ++inst) {
    const Eigen::Index M = 1 + inst % 5;
    const double eps = inst % 2 ? 0.1 : 0.0;
    PointSet<> x(1, M);
    for (Eigen::Index m = 0; m < M; ++m) x(0, m) = rng.uniform(-1, 1);
    const auto base = SampleSet<>::uniform(x, Vector<>::Zero(M), eps, 1.0, Domain::cube(1));
    const double radius = global_max_estimate(base, fine).radius.hi;
    for (std::size_t k = 0; k < trials; ++k) {
      const Eigen::Index K = 1 + Eigen::Index(rng.integer(0, 3));
      PointSet<> w(1, K);
      Vector<> v(K);
      for (Eigen::Index j = 0; j < K; ++j) {
        w(0, j) = rng.uniform(-1, 1);
        v(j) = rng.uniform(-1, 1);
      }
      const ConsistentFunction<> f(w, v, 1.0, Metric::LInf,
                                   rng.coin() ? ConsistentFunction<>::Form::UpperCones
                                              : ConsistentFunction<>::Form::LowerCones);
      Vector<> y(M);
      for (Eigen::Index m = 0; m < M; ++m) y(m) = f(x.col(m)) + rng.uniform(-eps, eps);
      const auto est = global_max_estimate(base.with_values(y), fine);
      t.add(radius - gap(certified_max(f, coarse, 1.0).bracket(), est.value));
    }
  }
  return finish("gwce_global", t);
}

CheckResult check_global_vs_local(Rng rng, std::size_t) {
  Tracker t;
  const auto fine = make_grid(Domain::cube(1), 20000);
  for (int inst = 0; inst < 60; ++inst) {
    const auto s = random_instance(rng, 1, 1 + inst % 7, 1.0, Metric::LInf, inst % 2 ? 0.2 : 0.0, true);
    t.add(global_max_estimate(s, fine).value.hi - local_max_estimate(s, fine).value.lo);
  }
  return finish("global_not_below_local", t);
}

CheckResult check_lwce_midpoint(Rng rng, std::size_t) {
  Tracker t;
  const auto fine = make_grid(Domain::cube(1), 20000);
  for (int inst = 0; inst < 60; ++inst) {
    const auto s = univariate_exact(rng, 1 + inst % 6);
    const auto r = local_max_estimate(s, fine);
    const double best = lwce_max(s, r.point(), fine).hi;
    for (double shift : {-0.1, 0.1}) t.add(lwce_max(s, r.point() + shift * r.radius.lo, fine).lo - best);
  }
  return finish("lwce_midpoint_optimal", t, true);
}

CheckResult check_cell_certificate(Rng rng, std::size_t) {
  Tracker t;
  for (int inst = 0; inst < 20; ++inst) {
    const auto s = random_instance(rng, 1 + inst % 3, 1 + inst % 6, inst % 2 ? 0.5 : 1.0, metric_of(inst), 0.2, false);
    for (std::size_t k = 0; k < 4; ++k) {
      const auto f = generate_consistent_function(s, 3, rng, clamp_of(k));
      for (int q = 0; q < 30; ++q) {
        const Point<> x = random_domain_point(s.domain(), rng);
        const auto e = global_function_estimate(s, x);
        t.add(e.certificate - std::abs(f(x) - e.value));
        const auto l = local_function_estimate(s, x);
        t.add(l.halfwidth - std::abs(f(x) - l.value));
      }
    }
  }
  return finish("function_certificates", t);
}

CheckResult check_lower_bound(Rng rng, std::size_t) {
  Tracker t;
  for (int inst = 0; inst < 20; ++inst) {
    const Eigen::Index d = 1 + inst % 2;
    const Eigen::Index M = 1 + Eigen::Index(rng.integer(0, 15));
    const double alpha = inst % 4 < 2 ? 1.0 : 0.5;
    const double eps = inst % 3 == 0 ? 0.1 : 0.0;
    PointSet<> x(d, M);
    for (Eigen::Index m = 0; m < M; ++m) x.col(m) = random_domain_point(Domain::cube(d), rng);
    const auto s = SampleSet<>::uniform(x, Vector<>::Zero(M), eps, alpha, Domain::cube(d));
    const auto b = two_sided_bounds(d, alpha, M, s.eps());
    t.add(lp_norm_u_refined(s, 1.0, 1e-4).value.lo - (b.lower - 1e-3));
  }
  return finish("two_sided_lower_bound", t);
}

CheckResult check_grid_designs(Rng, std::size_t) {
  Tracker t;
  const double tol = 1e-4;
  for (Eigen::Index d : {1, 2}) {
    for (Eigen::Index N : {1, 2, 3, 4}) {
      for (double alpha : {0.5, 1.0}) {
        for (double eps : {0.0, 0.1}) {
          const auto r = design_report(d, N, alpha, 1.0, eps, tol);
          t.add(10 * tol - std::abs(r.lp.value.lo - r.cube->value));
          t.add(r.upper - r.lp.value.hi);
          t.add(r.lp.value.lo - r.lower);
        }
      }
    }
  }
  return finish("grid_design_values", t);
}

CheckResult check_jitter(Rng, std::size_t) {
  Tracker t;
  for (Eigen::Index d : {1, 2}) {
    for (Eigen::Index N : {1, 2, 3, 4}) {
      const auto sites = grid_design(d, N);
      const auto s = SampleSet<>::uniform(sites, Vector<>::Zero(sites.cols()), 0.0, 1.0, Domain::cube(d));
      const auto cm = certified_max_envelope(s, Envelope::Fill, make_grid(Domain::cube(d), d == 1 ? 4096 : 512));
      const auto j = jitter_bounds(cm, 0.0, 2.0 / double(N), d, s.size(), 1.0);
      t.add(j.near_optimal.value_or(false) ? 9.0 - j.ratio : -1.0);
    }
  }
  return finish("jitter_factor", t);
}

CheckResult check_admissibility_table(Rng, std::size_t) {
  // Exhaustive small table against the ordering of the envelopes at the sites.
  Tracker t;
  PointSet<> x(1, 3);
  x << -1, 0, 1;
  for (int code = 0; code < 125 * 8; ++code) {
    Vector<> y(3), e(3);
    int c = code;
    for (int m = 0; m < 3; ++m) {
      y(m) = double(c % 5 - 2);
      c /= 5;
    }
    for (int m = 0; m < 3; ++m) {
      e(m) = double(c % 2);
      c /= 2;
    }
    const SampleSet<> s(x, y, e, 1.0, Domain::cube(1));
    bool ordered = true;
    for (Eigen::Index m = 0; m < 3; ++m) ordered = ordered && eval_lower(s, s.site(m)) <= eval_upper(s, s.site(m));
    t.add(ordered == check_admissible(s) ? 0.0 : -1.0);
  }
  return finish("admissibility_table", t);
}

}  // namespace

std::vector<CheckResult> run_verify(std::uint64_t seed, std::size_t trials) {
  if (trials == 0) throw ArgumentError("verify needs at least one trial");
  using Check = CheckResult (*)(Rng, std::size_t);
  const std::vector<Check> checks = {check_sandwich,         check_data_consistency, check_generator_holder,
                                     check_closed_forms,     check_gwce_local,       check_gwce_global,
                                     check_global_vs_local,  check_lwce_midpoint,    check_cell_certificate,
                                     check_lower_bound,      check_grid_designs,     check_jitter,
                                     check_admissibility_table};
  const Rng root(seed);
  std::vector<CheckResult> out;
  for (std::size_t k = 0; k < checks.size(); ++k) out.push_back(checks[k](root.split(k), trials));
  return out;
}

std::string render_verify(const std::vector<CheckResult>& checks, std::uint64_t seed, std::size_t trials,
                          Format format) {
  std::size_t passed = 0;
  for (const auto& c : checks) passed += c.passed;
  if (format == Format::Json) {
    nlohmann::ordered_json j;
    j["seed"] = seed;
    j["trials"] = trials;
    j["passed"] = passed == checks.size();
    auto arr = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
      arr.push_back({{"check", c.name},
                     {"passed", c.passed},
                     {"cases", c.cases},
                     {"worst_margin", format_number(c.worst_margin)}});
    }
    j["checks"] = std::move(arr);
    return j.dump(2) + "\n";
  }
  std::string out = csv_line({"check", "status", "cases", "worst_margin"});
  for (const auto& c : checks) {
    out += csv_line({c.name, c.passed ? "PASS" : "FAIL", std::to_string(c.cases), format_number(c.worst_margin)});
  }
  out += csv_line({"summary", passed == checks.size() ? "PASS" : "FAIL",
                   std::to_string(passed) + "/" + std::to_string(checks.size()),
                   "seed=" + std::to_string(seed) + " trials=" + std::to_string(trials)});
  return out;
}

}  // namespace optrec

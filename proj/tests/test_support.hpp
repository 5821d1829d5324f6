#pragma once

#include <optrec/envelopes.hpp>
#include <optrec/random.hpp>

#include <algorithm>
#include <limits>
#include <vector>

namespace optrec::testing {

inline Point<> p1(double t) {
  Point<> p(1);
  p << t;
  return p;
}

inline SampleSet<> univariate(const std::vector<double>& x, const std::vector<double>& y,
                              const std::vector<double>& e, double alpha = 1.0) {
  const auto M = Eigen::Index(x.size());
  PointSet<> sites = Eigen::Map<const Eigen::RowVectorXd>(x.data(), M);
  return SampleSet<>(sites, Eigen::Map<const Vector<>>(y.data(), M), Eigen::Map<const Vector<>>(e.data(), M), alpha,
                     Domain::cube(1));
}

/// Random Hölder function: min of cones over a few random anchors, scaled by
/// a factor in [0, 1].
struct RandomHolder {
  PointSet<> anchors;
  Vector<> values;
  double scale;
  double alpha;
  Metric metric;

  double operator()(const auto& x) const {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < anchors.cols(); ++k) {
      best = std::min(best, values(k) + std::pow(norm(anchors.col(k) - x, metric), alpha));
    }
    return scale * best;
  }
};

inline RandomHolder random_holder(Rng& rng, const Domain& dom, double alpha) {
  RandomHolder f;
  const Eigen::Index K = 1 + Eigen::Index(rng.integer(0, 3));
  f.anchors.resize(dom.dim, K);
  f.values.resize(K);
  for (Eigen::Index k = 0; k < K; ++k) {
    f.anchors.col(k) = random_domain_point(dom, rng);
    f.values(k) = rng.uniform(-1, 1);
  }
  f.scale = rng.uniform(0, 1);
  f.alpha = alpha;
  f.metric = dom.metric;
  return f;
}

/// Admissible instance: samples of a random Hölder function at random sites,
/// perturbed within random error bounds (up to eps_max; common when asked).
inline SampleSet<> random_instance(Rng& rng, Eigen::Index d, Eigen::Index M, double alpha, Metric metric,
                                   double eps_max, bool common_eps) {
  const Domain dom(metric, d);
  const auto f = random_holder(rng, dom, alpha);
  PointSet<> x(d, M);
  Vector<> y(M), e(M);
  const double common = rng.uniform(0, eps_max);
  for (Eigen::Index m = 0; m < M; ++m) {
    x.col(m) = random_domain_point(dom, rng);
    e(m) = common_eps ? common : rng.uniform(0, eps_max);
    y(m) = f(x.col(m)) + rng.uniform(-e(m), e(m));
  }
  return SampleSet<>(x, y, e, alpha, dom);
}

/// Exact univariate Lipschitz data at sorted distinct interior sites.
inline SampleSet<> random_univariate_exact(Rng& rng, Eigen::Index M) {
  std::vector<double> x;
  while (Eigen::Index(x.size()) < M) {
    const double t = rng.uniform(-0.999, 0.999);
    bool close = false;
    for (double s : x) close = close || std::abs(s - t) < 1e-3;
    if (!close) x.push_back(t);
  }
  std::sort(x.begin(), x.end());
  std::vector<double> y(x.size());
  y[0] = rng.uniform(-1, 1);
  for (std::size_t m = 1; m < x.size(); ++m) y[m] = y[m - 1] + rng.uniform(-1, 1) * (x[m] - x[m - 1]);
  return univariate(x, y, std::vector<double>(x.size(), 0.0));
}

/// Exact max of u for univariate Lipschitz data with arbitrary error bounds:
/// u is piecewise linear with slopes +-1, so its maximum sits at -1, at 1, or
/// where an ascending branch of one cone meets a descending branch of another.
inline double brute_force_max_upper_1d(const SampleSet<>& s) {
  const Eigen::Index M = s.size();
  auto u = [&](double t) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index m = 0; m < M; ++m) best = std::min(best, s.values()(m) + s.eps()(m) + std::abs(t - s.sites()(0, m)));
    return best;
  };
  double best = std::max(u(-1.0), u(1.0));
  for (Eigen::Index m = 0; m < M; ++m) {
    for (Eigen::Index n = 0; n < M; ++n) {
      // y'_m + (t - x_m) = y'_n + (x_n - t)
      const double ym = s.values()(m) + s.eps()(m);
      const double yn = s.values()(n) + s.eps()(n);
      const double t = (s.sites()(0, m) + s.sites()(0, n) + yn - ym) / 2;
      if (t >= -1 && t <= 1) best = std::max(best, u(t));
    }
  }
  return best;
}

}  // namespace optrec::testing

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string_view>

#include "optrec/envelopes.hpp"
#include "optrec/interval.hpp"
#include "optrec/maximize.hpp"
#include "optrec/random.hpp"

namespace optrec {

enum class EstimateKind { Local, Global, GeneralEps };

inline std::string_view to_string(EstimateKind kind) {
  switch (kind) {
    case EstimateKind::Local: return "local";
    case EstimateKind::Global: return "global";
    case EstimateKind::GeneralEps: return "general_eps";
  }
  return "?";
}

/// Estimate of max[f] with its worst-case error.
///
/// `value` brackets the estimator's output and `radius` brackets its
/// worst-case error; both are degenerate when every maximum involved is known
/// in closed form. For GeneralEps, `radius` is [lower bound on the best
/// achievable global error, upper bound on this estimator's global error].
template <typename Scalar = double>
struct EstimateReport {
  Interval<Scalar> value;
  Interval<Scalar> radius;
  EstimateKind kind{EstimateKind::Local};

  bool exact() const { return value.degenerate() && radius.degenerate(); }
  /// Point estimate (bracket midpoint when not exact).
  Scalar point() const { return value.mid(); }
  /// Bound on |max[f] - point()| valid for every consistent f.
  Scalar certified_error() const { return radius.hi + value.width() / Scalar(2); }
};

/// max[u] for `s`: closed form when the univariate exact-data case applies,
/// otherwise a certified bracket over `grid`.
template <typename Scalar>
Interval<Scalar> max_upper_bracket(const SampleSet<Scalar>& s, const Grid<Scalar>& grid) {
  require_admissible(s);
  if (univariate_exact_applicable(s)) return Interval<Scalar>::point(max_upper_univariate_exact(sorted_univariate(s)));
  return certified_max_envelope(s, Envelope::Upper, grid).bracket();
}

/// max[U]: exact (fill distance)^alpha in one dimension, certified bracket otherwise.
template <typename Scalar>
Interval<Scalar> max_fill_bracket(const SampleSet<Scalar>& s, const Grid<Scalar>& grid) {
  if (s.dim() == 1) return Interval<Scalar>::point(max_fill_univariate_exact(s));
  return certified_max_envelope(s, Envelope::Fill, grid).bracket();
}

/// max[u_{0,eps}]: reduces to max[U] + eps for common eps.
template <typename Scalar>
Interval<Scalar> max_zero_data_bracket(const SampleSet<Scalar>& s, const Grid<Scalar>& grid) {
  if (s.common_eps()) return max_fill_bracket(s, grid) + s.eps()(0);
  return certified_max_envelope(s, Envelope::ZeroData, grid).bracket();
}

/// Chebyshev center and radius of the set of maxima of all consistent
/// functions: value = (max[l] + max[u]) / 2, radius = (max[u] - max[l]) / 2.
template <typename Scalar>
EstimateReport<Scalar> local_max_estimate(const SampleSet<Scalar>& s, const Grid<Scalar>& grid) {
  const Scalar lower = max_lower_exact(s);
  const Interval<Scalar> upper = max_upper_bracket(s, grid);
  EstimateReport<Scalar> r;
  r.kind = EstimateKind::Local;
  r.value = {(lower + upper.lo) / Scalar(2), (lower + upper.hi) / Scalar(2)};
  r.radius = {(upper.lo - lower) / Scalar(2), (upper.hi - lower) / Scalar(2)};
  return r;
}

/// Local worst-case error of estimating max[f] by z:
/// max(max[u] - z, z - max[l]), bracketed when max[u] is.
template <typename Scalar>
Interval<Scalar> lwce_max(const SampleSet<Scalar>& s, Scalar z, const Grid<Scalar>& grid) {
  const Scalar lower = max_lower_exact(s);
  const Interval<Scalar> upper = max_upper_bracket(s, grid);
  return {std::max(upper.lo - z, z - lower), std::max(upper.hi - z, z - lower)};
}

/// Global estimate max_m(y_m) + max[U]/2 with error max[U]/2 + eps, for a
/// common error bound eps. The estimate does not depend on eps.
template <typename Scalar>
EstimateReport<Scalar> global_max_estimate(const SampleSet<Scalar>& s, const Grid<Scalar>& grid) {
  if (!s.common_eps()) {
    throw ArgumentError("global max estimate requires a common eps; use general_max_estimate for unequal eps_m");
  }
  require_admissible(s);
  const Interval<Scalar> fill = max_fill_bracket(s, grid);
  const Scalar ymax = s.values().maxCoeff();
  EstimateReport<Scalar> r;
  r.kind = EstimateKind::Global;
  r.value = Scalar(0.5) * fill + ymax;
  r.radius = Scalar(0.5) * fill + s.eps()(0);
  return r;
}

/// Global estimate for unequal eps_m:
/// max_m(y_m) + max[u_{0,eps}]/2 - max_m(eps_m)/2, with radius bracket
/// [max[u_{0,eps}]/2 + min eps/2, max[u_{0,eps}]/2 + max eps/2].
template <typename Scalar>
EstimateReport<Scalar> general_max_estimate(const SampleSet<Scalar>& s, const Grid<Scalar>& grid) {
  require_admissible(s);
  const Interval<Scalar> zmax = max_zero_data_bracket(s, grid);
  const Scalar ymax = s.values().maxCoeff();
  const Scalar emin = s.eps().minCoeff();
  const Scalar emax = s.eps().maxCoeff();
  EstimateReport<Scalar> r;
  r.kind = EstimateKind::GeneralEps;
  r.value = Scalar(0.5) * zmax + (ymax - emax / Scalar(2));
  r.radius = {zmax.lo / Scalar(2) + emin / Scalar(2), zmax.hi / Scalar(2) + emax / Scalar(2)};
  return r;
}

template <typename Scalar = double>
struct FunctionEstimate {
  Scalar value;
  Scalar halfwidth;
};

/// Pointwise Chebyshev center (l(x) + u(x))/2 and radius (u(x) - l(x))/2.
template <typename Scalar, typename Derived>
FunctionEstimate<Scalar> local_function_estimate(const SampleSet<Scalar>& s, const Eigen::MatrixBase<Derived>& x) {
  require_admissible(s);
  const auto env = evaluate_envelopes(s, x);
  return {(env.lower + env.upper) / Scalar(2), (env.upper - env.lower) / Scalar(2)};
}

/// 0-based index m minimizing eps_m + dist(x, x_m)^alpha (lowest on ties).
template <typename Scalar, typename Derived>
Eigen::Index voronoi_cell_index(const SampleSet<Scalar>& s, const Eigen::MatrixBase<Derived>& x) {
  detail::require_in_domain(s, x);
  Eigen::Index best = 0;
  Scalar best_v = std::numeric_limits<Scalar>::infinity();
  for (Eigen::Index m = 0; m < s.size(); ++m) {
    const Scalar v = s.eps()(m) + detail::holder_dist(s.site(m), x, s.metric(), s.alpha());
    if (v < best_v) {
      best_v = v;
      best = m;
    }
  }
  return best;
}

template <typename Scalar = double>
struct CellEstimate {
  Scalar value;        // y_m of the cell containing x
  Scalar certificate;  // u_{0,eps}(x): bound on |f(x) - value| for every consistent f
  Eigen::Index cell;   // 0-based
};

/// Piecewise-constant global recovery: returns y_m for the Voronoi-type cell
/// of x, with the pointwise certificate u_{0,eps}(x).
template <typename Scalar, typename Derived>
CellEstimate<Scalar> global_function_estimate(const SampleSet<Scalar>& s, const Eigen::MatrixBase<Derived>& x) {
  require_admissible(s);
  const Eigen::Index m = voronoi_cell_index(s, x);
  return {s.values()(m), detail::envelope_unchecked(s, Envelope::ZeroData, x), m};
}

template <typename Scalar = double>
struct GwceReport {
  std::size_t trials{0};
  std::size_t violations{0};
  Scalar max_error_lo{0};  // largest certified lower bound on |max[f] - estimate|
  Scalar max_error_hi{0};  // largest upper bound on |max[f] - estimate|
  Scalar radius_hi{0};
  /// radius_hi - max_error_lo; negative iff a violation was certified.
  Scalar worst_margin() const { return radius_hi - max_error_lo; }
};

/// Monte-Carlo estimate of the worst-case error of a max estimator.
///
/// `make_function(rng, trial)` returns a consistent function (callable on a
/// grid column); its maximum is bracketed on `grid`. A violation is counted
/// only when the certified error lower bound exceeds `radius.hi`. Each trial
/// receives its own stream `Rng(seed).split(trial)`.
template <typename Scalar, typename MakeFunction>
GwceReport<Scalar> gwce_check(MakeFunction&& make_function, std::size_t trials, std::uint64_t seed,
                              const Grid<Scalar>& grid, Scalar alpha, Interval<Scalar> estimate,
                              Interval<Scalar> radius) {
  GwceReport<Scalar> rep;
  rep.trials = trials;
  rep.radius_hi = radius.hi;
  const Rng root(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = root.split(t);
    const auto f = make_function(rng, t);
    const auto fmax = certified_max(f, grid, alpha);
    const Scalar lo = gap(fmax.bracket(), estimate);
    const Scalar hi = spread(fmax.bracket(), estimate);
    rep.max_error_lo = std::max(rep.max_error_lo, lo);
    rep.max_error_hi = std::max(rep.max_error_hi, hi);
    if (lo > radius.hi + Scalar(1e-12)) ++rep.violations;
  }
  return rep;
}

}  // namespace optrec

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "optrec/envelopes.hpp"
#include "optrec/errors.hpp"
#include "optrec/geometry.hpp"
#include "optrec/interval.hpp"
#include "optrec/maximize.hpp"
#include "optrec/quadrature.hpp"

namespace optrec {

/// Centers of the N^d congruent cubes of side 2/N partitioning [-1,1]^d.
template <typename Scalar = double>
PointSet<Scalar> grid_design(Eigen::Index d, Eigen::Index N) {
  if (d < 1 || N < 1) throw ArgumentError("grid design needs d >= 1 and N >= 1");
  return make_grid<Scalar>(Domain::cube(d), N).points;
}

template <typename Scalar = double>
constexpr Scalar infinite_p() {
  return std::numeric_limits<Scalar>::infinity();
}

/// L_p norm of u_{0,eps} under the normalized measure. For finite p `value`
/// is a point (quadrature); for p = inf it is a certified bracket.
template <typename Scalar = double>
struct LpNorm {
  Interval<Scalar> value;
  Scalar error_estimate{0};
  Eigen::Index resolution{0};
  bool converged{true};
};

namespace detail {

template <typename Scalar>
void require_p(Scalar p) {
  if (!(p >= Scalar(1))) throw ArgumentError("p must be at least 1 (or infinity)");
}

template <typename Scalar>
Scalar lp_midpoint(const SampleSet<Scalar>& s, Scalar p, Eigen::Index n) {
  const Scalar mean = midpoint_mean<Scalar>(s.domain(), n, [&](const auto& x) {
    const Scalar u = envelope_unchecked(s, Envelope::ZeroData, x);
    return p == Scalar(1) ? u : std::pow(u, p);
  });
  return p == Scalar(1) ? mean : std::pow(mean, Scalar(1) / p);
}

inline Eigen::Index max_resolution(Eigen::Index d, double max_points) {
  return std::max<Eigen::Index>(1, Eigen::Index(std::floor(std::pow(max_points, 1.0 / double(d)) + 1e-9)));
}

}  // namespace detail

/// ||u_{0,eps}||_{L_p} at a fixed per-axis resolution (values y are ignored).
template <typename Scalar>
LpNorm<Scalar> lp_norm_u(const SampleSet<Scalar>& s, Scalar p, Eigen::Index quad_n) {
  detail::require_p(p);
  LpNorm<Scalar> out;
  out.resolution = quad_n;
  if (std::isinf(p)) {
    out.value = certified_max_envelope(s.zero_data(), Envelope::ZeroData, make_grid<Scalar>(s.domain(), quad_n)).bracket();
    out.error_estimate = out.value.width();
    return out;
  }
  out.value = Interval<Scalar>::point(detail::lp_midpoint(s, p, quad_n));
  out.converged = false;
  return out;
}

/// ||u_{0,eps}||_{L_p} with the resolution doubled from `n_start` until two
/// successive midpoint sums agree within `tol`, and the finer one also agrees
/// with the sum at one more cell per axis. For p = inf the grid is
/// chosen so that the certified bracket is narrower than `tol`, capped at
/// roughly `max_points` grid points.
template <typename Scalar>
LpNorm<Scalar> lp_norm_u_refined(const SampleSet<Scalar>& s, Scalar p, Scalar tol, Eigen::Index n_start = 8,
                                 double max_points = 4.0e6) {
  detail::require_p(p);
  if (!(tol > 0)) throw ArgumentError("quadrature tolerance must be positive");
  const Eigen::Index n_cap = detail::max_resolution(s.dim(), max_points);
  if (std::isinf(p)) {
    const Scalar mesh = std::pow(tol, Scalar(1) / s.alpha());
    auto n = Eigen::Index(std::ceil(cell_radius<Scalar>(s.metric(), s.dim(), 1) / mesh - Scalar(1e-9)));
    n = std::clamp<Eigen::Index>(n, 1, n_cap);
    LpNorm<Scalar> out = lp_norm_u(s, p, n);
    out.converged = out.value.width() <= tol;
    return out;
  }
  Eigen::Index n = std::max<Eigen::Index>(n_start, 1);
  Scalar previous = detail::lp_midpoint(s, p, n);
  LpNorm<Scalar> out;
  out.converged = false;
  while (2 * n <= n_cap) {
    n *= 2;
    const Scalar current = detail::lp_midpoint(s, p, n);
    out.error_estimate = std::abs(current - previous);
    previous = current;
    if (out.error_estimate <= tol && n + 1 <= n_cap) {
      // Nested grids can repeat the error of a cell holding a kink exactly,
      // so agreement is confirmed against the non-nested resolution n + 1.
      out.error_estimate = std::max(out.error_estimate, std::abs(detail::lp_midpoint(s, p, n + 1) - current));
      if (out.error_estimate <= tol) {
        out.converged = true;
        break;
      }
    }
  }
  out.value = Interval<Scalar>::point(previous);
  out.resolution = n;
  return out;
}

template <typename Scalar = double>
struct TwoSidedBounds {
  Scalar lower;
  Scalar upper;
};

/// Bounds on the smallest achievable ||u_{0,eps}||_{L_p} over all choices of
/// M sites in the unit ball: min eps + M^{-alpha/d}/2 and max eps + 3 M^{-alpha/d}.
/// The lower bound holds for every site set.
template <typename Scalar>
TwoSidedBounds<Scalar> two_sided_bounds(Eigen::Index d, Scalar alpha, Eigen::Index M, const Vector<Scalar>& eps) {
  if (d < 1 || M < 1) throw ArgumentError("bounds need d >= 1 and M >= 1");
  detail::require_alpha(alpha);
  if (eps.size() == 0) throw ArgumentError("bounds need at least one error bound");
  const Scalar rate = std::pow(Scalar(M), -alpha / Scalar(d));
  return {eps.minCoeff() + Scalar(0.5) * rate, eps.maxCoeff() + Scalar(3) * rate};
}

template <typename Scalar = double>
struct CubeValue {
  Scalar value;           // formula value of the optimal L_p error
  Scalar integral_value;  // same quantity through the 1-D integral
  bool exact;             // true when M^{1/d} is an integer (value is attained)
};

/// True when M = N^d for an integer N.
inline bool is_perfect_power(Eigen::Index M, Eigen::Index d) {
  const auto N = Eigen::Index(std::llround(std::pow(double(M), 1.0 / double(d))));
  for (Eigen::Index c = std::max<Eigen::Index>(N - 1, 1); c <= N + 1; ++c) {
    double power = 1;
    for (Eigen::Index i = 0; i < d; ++i) power *= double(c);
    if (power == double(M)) return true;
  }
  return false;
}

/// Smallest ||u_{0,eps}||_{L_p} over M sites in [-1,1]^d with the l_inf
/// metric and common eps:
///   (eps + M^{-alpha/d})^p - M * int_{eps^p}^{(eps + M^{-alpha/d})^p} (t^{1/p} - eps)^{d/alpha} dt,
/// to the power 1/p. For eps = 0 this is (d/(d + alpha p))^{1/p} M^{-alpha/d}.
/// When M^{1/d} is not an integer the value is only a lower bound.
template <typename Scalar>
CubeValue<Scalar> cube_optimal_lp(Eigen::Index d, Scalar alpha, Scalar p, Eigen::Index M, Scalar eps) {
  if (d < 1 || M < 1) throw ArgumentError("cube value needs d >= 1 and M >= 1");
  detail::require_alpha(alpha);
  if (!(p >= Scalar(1)) || std::isinf(p)) throw ArgumentError("cube value needs p in [1, inf)");
  if (!(eps >= Scalar(0))) throw ArgumentError("eps must be nonnegative");
  const Scalar rate = std::pow(Scalar(M), -alpha / Scalar(d));
  const Scalar top = std::pow(eps + rate, p);
  const Scalar bottom = std::pow(eps, p);
  const Scalar power = Scalar(d) / alpha;
  auto integrand = [&](Scalar t) {
    const Scalar base = std::max(Scalar(0), std::pow(t, Scalar(1) / p) - eps);
    return std::pow(base, power);
  };
  const auto quad = integrate_adaptive<Scalar>(integrand, bottom, top, Scalar(1e-10));
  const Scalar integral_value = std::pow(std::max(Scalar(0), top - Scalar(M) * quad.value), Scalar(1) / p);

  CubeValue<Scalar> out;
  out.integral_value = integral_value;
  out.exact = is_perfect_power(M, d);
  if (eps == Scalar(0)) {
    out.value = std::pow(Scalar(d) / (Scalar(d) + alpha * p), Scalar(1) / p) * rate;
  } else {
    out.value = integral_value;
  }
  return out;
}

template <typename Scalar = double>
struct JitterBounds {
  Interval<Scalar> lower;  // max[U]/2 + eps
  Interval<Scalar> upper;  // max[U]/2 + eps + delta
  bool packing_ok{false};  // delta <= 2 / M^{1/d}
  bool fill_premise_ok{false};
  std::optional<bool> near_optimal;  // upper.hi <= 9 * lower.lo, when the premises hold
  Scalar ratio{0};                   // upper.hi / lower.lo
};

/// Lower/upper bounds on the global error of the max estimator under jittered
/// sites (|site perturbation| <= delta) and the factor-9 near-optimality check.
template <typename Scalar>
JitterBounds<Scalar> jitter_bounds(Interval<Scalar> max_fill, Scalar eps, Scalar delta, Eigen::Index d,
                                   Eigen::Index M, Scalar alpha) {
  if (!(delta >= Scalar(0))) throw ArgumentError("jitter radius delta must be nonnegative");
  if (!(eps >= Scalar(0))) throw ArgumentError("eps must be nonnegative");
  if (d < 1 || M < 1) throw ArgumentError("jitter bounds need d >= 1 and M >= 1");
  detail::require_alpha(alpha);
  JitterBounds<Scalar> out;
  out.lower = Scalar(0.5) * max_fill + eps;
  out.upper = out.lower + delta;
  out.packing_ok = delta <= Scalar(2) / std::pow(Scalar(M), Scalar(1) / Scalar(d)) * (Scalar(1) + Scalar(1e-12));
  out.fill_premise_ok = max_fill.hi >= Scalar(0.5) * std::pow(Scalar(M), -alpha / Scalar(d));
  out.ratio = out.lower.lo > 0 ? out.upper.hi / out.lower.lo : std::numeric_limits<Scalar>::infinity();
  if (out.packing_ok && out.fill_premise_ok) out.near_optimal = out.upper.hi <= Scalar(9) * out.lower.lo;
  return out;
}

template <typename Scalar>
JitterBounds<Scalar> jitter_bounds(const CertifiedMax<Scalar>& max_fill, Scalar eps, Scalar delta, Eigen::Index d,
                                   Eigen::Index M, Scalar alpha) {
  return jitter_bounds(max_fill.bracket(), eps, delta, d, M, alpha);
}

/// One row of the design table for grid designs on the cube.
template <typename Scalar = double>
struct DesignReport {
  Eigen::Index d{1};
  Eigen::Index N{1};
  Eigen::Index M{1};
  PointSet<Scalar> sites;
  Scalar p{1};
  LpNorm<Scalar> lp;
  Scalar lower{0};
  Scalar upper{0};
  std::optional<CubeValue<Scalar>> cube;  // present for finite p
};

template <typename Scalar>
DesignReport<Scalar> design_report(Eigen::Index d, Eigen::Index N, Scalar alpha, Scalar p, Scalar eps,
                                   Scalar quad_tol = Scalar(1e-4)) {
  DesignReport<Scalar> r;
  r.d = d;
  r.N = N;
  r.sites = grid_design<Scalar>(d, N);
  r.M = r.sites.cols();
  r.p = p;
  const auto s = SampleSet<Scalar>::uniform(r.sites, Vector<Scalar>::Zero(r.M), eps, alpha, Domain::cube(d));
  r.lp = lp_norm_u_refined(s, p, quad_tol);
  const auto b = two_sided_bounds(d, alpha, r.M, s.eps());
  r.lower = b.lower;
  r.upper = b.upper;
  if (!std::isinf(p)) r.cube = cube_optimal_lp(d, alpha, p, r.M, eps);
  return r;
}

}  // namespace optrec

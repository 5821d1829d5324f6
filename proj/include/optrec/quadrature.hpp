#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "optrec/errors.hpp"
#include "optrec/geometry.hpp"

namespace optrec {

template <typename Scalar = double>
struct QuadratureResult {
  Scalar value{0};
  Scalar error_estimate{0};
  int evaluations{0};
  bool converged{false};
};

namespace detail {

// 7-point Gauss / 15-point Kronrod pair (QUADPACK qk15 constants).
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename Scalar>
struct Panel {
  Scalar a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <typename Scalar, typename F>
Panel<Scalar> gauss_kronrod_15(F& f, Scalar a, Scalar b) {
  const Scalar center = (a + b) / 2;
  const Scalar half = (b - a) / 2;
  const Scalar fc = f(center);
  Scalar kronrod = fc * Scalar(kKronrodWeights[7]);
  Scalar gauss = fc * Scalar(kGaussWeights[3]);
  for (int j = 0; j < 7; ++j) {
    const Scalar dx = half * Scalar(kKronrodNodes[std::size_t(j)]);
    const Scalar pair = f(center - dx) + f(center + dx);
    kronrod += Scalar(kKronrodWeights[std::size_t(j)]) * pair;
    if (j % 2 == 1) gauss += Scalar(kGaussWeights[std::size_t(j / 2)]) * pair;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod integration of f over [a, b]; bisects the
/// panel with the largest error until the total estimated error is below
/// max(abs_tol, rel_tol * |integral|).
template <typename Scalar = double, typename F>
QuadratureResult<Scalar> integrate_adaptive(F&& f, Scalar a, Scalar b, Scalar rel_tol = Scalar(1e-10),
                                            Scalar abs_tol = Scalar(0), int max_panels = 4000) {
  QuadratureResult<Scalar> out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  std::priority_queue<detail::Panel<Scalar>> panels;
  auto first = detail::gauss_kronrod_15<Scalar>(f, a, b);
  out.evaluations = 15;
  Scalar total = first.value;
  Scalar error = first.error;
  panels.push(first);
  const Scalar floor = 50 * std::numeric_limits<Scalar>::epsilon();
  while (error > std::max(abs_tol, rel_tol * std::abs(total)) && int(panels.size()) < max_panels) {
    const auto worst = panels.top();
    panels.pop();
    const Scalar mid = (worst.a + worst.b) / 2;
    auto left = detail::gauss_kronrod_15<Scalar>(f, worst.a, mid);
    auto right = detail::gauss_kronrod_15<Scalar>(f, mid, worst.b);
    out.evaluations += 30;
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    if (error <= floor * std::abs(total)) break;
  }
  // Re-sum to shed accumulated cancellation from the running updates.
  total = 0;
  error = 0;
  while (!panels.empty()) {
    total += panels.top().value;
    error += panels.top().error;
    panels.pop();
  }
  out.value = total;
  out.error_estimate = error;
  out.converged = error <= std::max({abs_tol, rel_tol * std::abs(total), floor * std::abs(total)});
  return out;
}

/// Midpoint rule for the mean of g over the domain under the normalized
/// measure: averages g over the centers of the n^d lattice cells of
/// [-1,1]^d that fall inside the domain. The summation order is fixed.
template <typename Scalar = double, typename G>
Scalar midpoint_mean(const Domain& dom, Eigen::Index n_per_axis, G&& g) {
  if (n_per_axis < 1) throw ArgumentError("quadrature needs at least one cell per axis");
  const Eigen::Index d = dom.dim;
  const double total_d = std::pow(double(n_per_axis), double(d));
  if (total_d > 1.0e8) throw ArgumentError("quadrature grid too large");
  const auto total = static_cast<Eigen::Index>(total_d + 0.5);
  std::vector<Eigen::Index> idx(std::size_t(d), 0);
  Point<Scalar> c(d);
  Scalar sum = 0;
  Eigen::Index inside = 0;
  for (Eigen::Index k = 0; k < total; ++k) {
    for (Eigen::Index i = 0; i < d; ++i) {
      c(i) = Scalar(-1) + Scalar(2 * idx[std::size_t(i)] + 1) / Scalar(n_per_axis);
    }
    if (dom.metric == Metric::LInf || norm(c, dom.metric) <= Scalar(1)) {
      sum += g(c);
      ++inside;
    }
    for (Eigen::Index i = d - 1; i >= 0; --i) {
      if (++idx[std::size_t(i)] < n_per_axis) break;
      idx[std::size_t(i)] = 0;
    }
  }
  if (inside == 0) throw ArgumentError("quadrature grid has no point inside the domain");
  return sum / Scalar(inside);
}

}  // namespace optrec

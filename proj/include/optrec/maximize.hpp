#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "optrec/envelopes.hpp"
#include "optrec/errors.hpp"
#include "optrec/geometry.hpp"
#include "optrec/interval.hpp"

namespace optrec {

/// Bracket [lo, hi] guaranteed to contain the global maximum of a function
/// whose Hölder modulus is dist^alpha. lo is attained at `argmax_witness`.
template <typename Scalar = double>
struct CertifiedMax {
  Scalar lo{0};
  Scalar hi{0};
  Scalar mesh{0};
  Scalar slack{0};  // mesh^alpha, the certified width
  Point<Scalar> argmax_witness;
  Eigen::Index witness_index{-1};

  Interval<Scalar> bracket() const { return {lo, hi}; }
  Scalar width() const { return slack; }
};

/// Scans `grid` and returns lo = max over the grid, hi = lo + mesh^alpha.
/// `f` must satisfy |f(x) - f(x')| <= dist(x, x')^alpha. Ties resolve to the
/// lowest grid index.
template <typename Scalar, typename F>
CertifiedMax<Scalar> certified_max(F&& f, const Grid<Scalar>& grid, Scalar alpha) {
  if (grid.empty()) throw ArgumentError("certified maximization needs a nonempty grid");
  detail::require_alpha(alpha);
  Scalar best = -std::numeric_limits<Scalar>::infinity();
  Eigen::Index arg = 0;
  for (Eigen::Index j = 0; j < grid.size(); ++j) {
    const Scalar v = f(grid.points.col(j));
    if (v > best) {
      best = v;
      arg = j;
    }
  }
  CertifiedMax<Scalar> out;
  out.lo = best;
  out.mesh = grid.mesh;
  out.slack = alpha == Scalar(1) ? grid.mesh : std::pow(grid.mesh, alpha);
  out.hi = best + out.slack;
  out.argmax_witness = grid.points.col(arg);
  out.witness_index = arg;
  return out;
}

/// Certified maximum of one of the envelope functions of `s` over `grid`.
template <typename Scalar>
CertifiedMax<Scalar> certified_max_envelope(const SampleSet<Scalar>& s, Envelope which,
                                            const Grid<Scalar>& grid) {
  require_admissible(s);
  if (grid.empty()) throw ArgumentError("certified maximization needs a nonempty grid");
  if (grid.points.rows() != s.dim()) throw ArgumentError("grid dimension does not match the sample set");
  return certified_max(
      [&](const auto& x) { return detail::envelope_unchecked(s, which, x); }, grid, s.alpha());
}

/// Exact maximum of the lower envelope: max_m (y_m - eps_m).
template <typename Scalar>
Scalar max_lower_exact(const SampleSet<Scalar>& s) {
  require_admissible(s);
  return (s.values() - s.eps()).maxCoeff();
}

/// Breakpoints -1 = xi_0 <= xi_1 <= ... <= xi_M = 1; the upper envelope of
/// exact univariate Lipschitz data is governed by site m on [xi_{m-1}, xi_m].
template <typename Scalar = double>
struct Breakpoints {
  std::vector<Scalar> xi;

  /// 0-based index of the cell containing t (lowest on ties).
  std::size_t cell_of(Scalar t) const {
    for (std::size_t m = 1; m < xi.size(); ++m) {
      if (t <= xi[m]) return m - 1;
    }
    return xi.size() - 2;
  }
};

namespace detail {

template <typename Scalar>
void require_univariate_exact(const SampleSet<Scalar>& s) {
  if (s.dim() != 1) throw ArgumentError("univariate closed form requires d = 1");
  if (s.alpha() != Scalar(1)) throw ArgumentError("univariate closed form requires alpha = 1");
  if ((s.eps().array() != Scalar(0)).any()) throw ArgumentError("univariate closed form requires exact data (eps = 0)");
  const auto x = s.sites().row(0);
  for (Eigen::Index m = 0; m < s.size(); ++m) {
    if (!(x(m) > Scalar(-1) && x(m) < Scalar(1))) {
      throw ArgumentError("univariate closed form requires sites strictly inside (-1, 1)");
    }
    if (m > 0 && !(x(m) > x(m - 1))) {
      throw ArgumentError("univariate closed form requires strictly increasing sites");
    }
  }
  require_admissible(s);
}

}  // namespace detail

/// True when the univariate closed forms apply to `s` (up to sorting the sites).
template <typename Scalar>
bool univariate_exact_applicable(const SampleSet<Scalar>& s) {
  if (s.dim() != 1 || s.alpha() != Scalar(1) || (s.eps().array() != Scalar(0)).any()) return false;
  std::vector<Scalar> x(s.sites().data(), s.sites().data() + s.size());
  std::sort(x.begin(), x.end());
  for (std::size_t m = 0; m < x.size(); ++m) {
    if (!(x[m] > Scalar(-1) && x[m] < Scalar(1))) return false;
    if (m > 0 && !(x[m] > x[m - 1])) return false;
  }
  return true;
}

/// Copy of a univariate sample set with sites sorted increasingly.
template <typename Scalar>
SampleSet<Scalar> sorted_univariate(const SampleSet<Scalar>& s) {
  if (s.dim() != 1) throw ArgumentError("sorting sites requires d = 1");
  std::vector<Eigen::Index> order(static_cast<std::size_t>(s.size()));
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = Eigen::Index(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return s.sites()(0, a) < s.sites()(0, b); });
  PointSet<Scalar> x(1, s.size());
  Vector<Scalar> y(s.size()), e(s.size());
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    const Eigen::Index i = order[std::size_t(k)];
    x(0, k) = s.sites()(0, i);
    y(k) = s.values()(i);
    e(k) = s.eps()(i);
  }
  return SampleSet<Scalar>(std::move(x), std::move(y), std::move(e), s.alpha(), s.domain(), s.tol());
}

template <typename Scalar>
Breakpoints<Scalar> breakpoints_univariate(const SampleSet<Scalar>& s) {
  detail::require_univariate_exact(s);
  const auto x = s.sites().row(0);
  const auto& y = s.values();
  Breakpoints<Scalar> b;
  b.xi.reserve(std::size_t(s.size()) + 1);
  b.xi.push_back(Scalar(-1));
  for (Eigen::Index m = 0; m + 1 < s.size(); ++m) {
    b.xi.push_back((x(m) + x(m + 1) - y(m) + y(m + 1)) / Scalar(2));
  }
  b.xi.push_back(Scalar(1));
  return b;
}

/// Exact maximum of the upper envelope for univariate Lipschitz exact data.
///
/// Interior cells peak at the breakpoints, giving (x_{m+1} - x_m + y_{m+1} + y_m)/2.
/// The two boundary cells peak at -1 and 1 with values y_1 + x_1 + 1 and
/// y_M + 1 - x_M; both are produced by the same pair formula using ghost sites
/// mirrored through the endpoints (x_0 = -2 - x_1, y_0 = y_1 and
/// x_{M+1} = 2 - x_M, y_{M+1} = y_M).
template <typename Scalar>
Scalar max_upper_univariate_exact(const SampleSet<Scalar>& s) {
  detail::require_univariate_exact(s);
  const Eigen::Index M = s.size();
  std::vector<Scalar> x(std::size_t(M) + 2), y(std::size_t(M) + 2);
  for (Eigen::Index m = 0; m < M; ++m) {
    x[std::size_t(m) + 1] = s.sites()(0, m);
    y[std::size_t(m) + 1] = s.values()(m);
  }
  x.front() = Scalar(-2) - x[1];
  y.front() = y[1];
  x.back() = Scalar(2) - x[std::size_t(M)];
  y.back() = y[std::size_t(M)];
  Scalar best = -std::numeric_limits<Scalar>::infinity();
  for (std::size_t m = 0; m + 1 < x.size(); ++m) {
    best = std::max(best, (x[m + 1] - x[m] + y[m + 1] + y[m]) / Scalar(2));
  }
  return best;
}

/// Exact max of the fill function on [-1, 1]: (fill distance)^alpha, where the
/// fill distance is the largest of x_1 + 1, 1 - x_M and half the largest gap.
template <typename Scalar>
Scalar max_fill_univariate_exact(const SampleSet<Scalar>& s) {
  if (s.dim() != 1) throw ArgumentError("univariate fill distance requires d = 1");
  std::vector<Scalar> x(s.sites().data(), s.sites().data() + s.size());
  std::sort(x.begin(), x.end());
  Scalar h = std::max(x.front() + Scalar(1), Scalar(1) - x.back());
  for (std::size_t m = 1; m < x.size(); ++m) h = std::max(h, (x[m] - x[m - 1]) / Scalar(2));
  return s.alpha() == Scalar(1) ? h : std::pow(h, s.alpha());
}

}  // namespace optrec

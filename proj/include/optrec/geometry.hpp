#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "optrec/errors.hpp"

namespace optrec {

enum class Metric { L1, L2, LInf };

template <typename Scalar = double>
using Point = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Points stored column-wise, one point per column.
template <typename Scalar = double>
using PointSet = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar = double>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

inline std::string_view to_string(Metric metric) {
  switch (metric) {
    case Metric::L1: return "l1";
    case Metric::L2: return "l2";
    case Metric::LInf: return "linf";
  }
  return "?";
}

inline Metric parse_metric(std::string_view name) {
  if (name == "l1" || name == "L1") return Metric::L1;
  if (name == "l2" || name == "L2") return Metric::L2;
  if (name == "linf" || name == "LInf" || name == "inf") return Metric::LInf;
  throw ArgumentError("unknown metric '" + std::string(name) + "' (expected l1, l2 or linf)");
}

template <typename Derived>
typename Derived::Scalar norm(const Eigen::MatrixBase<Derived>& v, Metric metric) {
  switch (metric) {
    case Metric::L1: return v.template lpNorm<1>();
    case Metric::L2: return v.norm();
    case Metric::LInf: return v.template lpNorm<Eigen::Infinity>();
  }
  return std::numeric_limits<typename Derived::Scalar>::quiet_NaN();
}

namespace detail {

// Unchecked dist(a, b)^alpha for inner loops.
template <typename DA, typename DB>
typename DA::Scalar holder_dist(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b,
                                Metric metric, typename DA::Scalar alpha) {
  using Scalar = typename DA::Scalar;
  const Scalar r = norm(a - b, metric);
  return alpha == Scalar(1) ? r : std::pow(r, alpha);
}

template <typename Scalar>
void require_alpha(Scalar alpha) {
  if (!(alpha > Scalar(0) && alpha <= Scalar(1))) {
    throw ArgumentError("Hölder exponent must lie in (0, 1], got " + std::to_string(double(alpha)));
  }
}

}  // namespace detail

/// dist(x, x2)^alpha under the chosen norm.
template <typename DA, typename DB>
typename DA::Scalar dist_alpha(const Eigen::MatrixBase<DA>& x, const Eigen::MatrixBase<DB>& x2,
                               Metric metric, typename DA::Scalar alpha) {
  if (x.size() != x2.size()) {
    throw ArgumentError("dimension mismatch: " + std::to_string(x.size()) + " vs " +
                        std::to_string(x2.size()));
  }
  detail::require_alpha(alpha);
  return detail::holder_dist(x, x2, metric, alpha);
}

/// Closed unit ball of a norm on R^d. The LInf ball is the cube [-1,1]^d.
/// Integrals over the domain use the Lebesgue measure normalized to total mass 1.
struct Domain {
  Metric metric{Metric::LInf};
  Eigen::Index dim{1};

  Domain() = default;
  Domain(Metric m, Eigen::Index d) : metric(m), dim(d) {
    if (d < 1) throw ArgumentError("domain dimension must be at least 1");
  }

  static Domain cube(Eigen::Index d) { return Domain(Metric::LInf, d); }

  friend bool operator==(const Domain&, const Domain&) = default;
};

template <typename Derived>
bool domain_contains(const Domain& dom, const Eigen::MatrixBase<Derived>& x,
                     typename Derived::Scalar tol = 0) {
  if (x.size() != dom.dim) {
    throw ArgumentError("point of dimension " + std::to_string(x.size()) +
                        " tested against a domain of dimension " + std::to_string(dom.dim));
  }
  return norm(x, dom.metric) <= typename Derived::Scalar(1) + tol;
}

/// Finite point set covering the domain: every domain point lies within `mesh`
/// (in the domain metric) of some grid point.
template <typename Scalar = double>
struct Grid {
  PointSet<Scalar> points;
  Scalar mesh{0};

  Eigen::Index size() const { return points.cols(); }
  bool empty() const { return points.cols() == 0; }
};

/// Covering radius of one lattice cell of side 2/n, measured from its center.
template <typename Scalar = double>
Scalar cell_radius(Metric metric, Eigen::Index dim, Eigen::Index n_per_axis) {
  const Scalar half = Scalar(1) / Scalar(n_per_axis);
  switch (metric) {
    case Metric::L1: return half * Scalar(dim);
    case Metric::L2: return half * std::sqrt(Scalar(dim));
    case Metric::LInf: return half;
  }
  return half;
}

/// Cell-center lattice of [-1,1]^d with n cells per axis, restricted to the
/// domain. For non-cube balls, boundary cells whose center falls outside the
/// ball are split once and their outside sub-centers are pulled radially onto
/// the sphere, which keeps the cell radius a valid covering bound.
/// Points are ordered lexicographically with the first axis slowest.
template <typename Scalar = double>
Grid<Scalar> make_grid(const Domain& dom, Eigen::Index n_per_axis) {
  if (n_per_axis < 1) throw ArgumentError("grid needs at least one cell per axis");
  const Eigen::Index d = dom.dim;
  double total_d = std::pow(double(n_per_axis), double(d));
  if (total_d > 6.0e7) throw ArgumentError("grid too large: " + std::to_string(total_d) + " cells");
  const auto total = static_cast<Eigen::Index>(total_d + 0.5);

  const Scalar radius = cell_radius<Scalar>(dom.metric, d, n_per_axis);
  const Scalar quarter = Scalar(1) / Scalar(2 * n_per_axis);
  const Scalar nudge = Scalar(1) - 4 * std::numeric_limits<Scalar>::epsilon();

  std::vector<Scalar> coords;
  coords.reserve(static_cast<std::size_t>(total * d));
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(d), 0);
  Point<Scalar> c(d), s(d);

  for (Eigen::Index k = 0; k < total; ++k) {
    for (Eigen::Index i = 0; i < d; ++i) {
      c(i) = Scalar(-1) + Scalar(2 * idx[std::size_t(i)] + 1) / Scalar(n_per_axis);
    }
    const Scalar nc = norm(c, dom.metric);
    if (nc <= Scalar(1)) {
      coords.insert(coords.end(), c.data(), c.data() + d);
    } else if (nc <= Scalar(1) + radius) {
      const Eigen::Index corners = Eigen::Index(1) << d;
      for (Eigen::Index b = 0; b < corners; ++b) {
        for (Eigen::Index i = 0; i < d; ++i) s(i) = c(i) + (((b >> i) & 1) ? quarter : -quarter);
        const Scalar ns = norm(s, dom.metric);
        if (ns <= Scalar(1)) {
          coords.insert(coords.end(), s.data(), s.data() + d);
        } else if (ns <= Scalar(1) + radius / 2) {
          s *= nudge / ns;
          coords.insert(coords.end(), s.data(), s.data() + d);
        }
      }
    }
    for (Eigen::Index i = d - 1; i >= 0; --i) {
      if (++idx[std::size_t(i)] < n_per_axis) break;
      idx[std::size_t(i)] = 0;
    }
  }

  Grid<Scalar> grid;
  grid.points = Eigen::Map<const PointSet<Scalar>>(coords.data(), d, Eigen::Index(coords.size()) / d);
  grid.mesh = radius;
  return grid;
}

/// Grid whose mesh is at most `mesh` (smallest n satisfying the bound).
template <typename Scalar = double>
Grid<Scalar> make_grid_with_mesh(const Domain& dom, Scalar mesh) {
  if (!(mesh > 0)) throw ArgumentError("mesh must be positive");
  const Scalar per_cell = cell_radius<Scalar>(dom.metric, dom.dim, 1);
  auto n = static_cast<Eigen::Index>(std::ceil(per_cell / mesh - Scalar(1e-9)));
  return make_grid<Scalar>(dom, std::max<Eigen::Index>(n, 1));
}

}  // namespace optrec

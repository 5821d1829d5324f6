#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "optrec/errors.hpp"
#include "optrec/geometry.hpp"

namespace optrec {

/// Inexact point samples y_m = f(x_m) + e_m with |e_m| <= eps_m of a function
/// satisfying |f(x) - f(x')| <= dist(x, x')^alpha on `domain`.
template <typename Scalar = double>
class SampleSet {
 public:
  SampleSet(PointSet<Scalar> sites, Vector<Scalar> values, Vector<Scalar> eps, Scalar alpha,
            Domain domain, Scalar tol = Scalar(1e-12))
      : sites_(std::move(sites)),
        values_(std::move(values)),
        eps_(std::move(eps)),
        alpha_(alpha),
        domain_(domain),
        tol_(tol) {
    detail::require_alpha(alpha_);
    if (sites_.cols() < 1) throw ArgumentError("sample set needs at least one site");
    if (sites_.rows() != domain_.dim) {
      throw ArgumentError("sites have dimension " + std::to_string(sites_.rows()) +
                          " but the domain has dimension " + std::to_string(domain_.dim));
    }
    if (values_.size() != sites_.cols() || eps_.size() != sites_.cols()) {
      throw ArgumentError("sites, values and eps must have equal lengths (" +
                          std::to_string(sites_.cols()) + ", " + std::to_string(values_.size()) +
                          ", " + std::to_string(eps_.size()) + ")");
    }
    if (!sites_.allFinite() || !values_.allFinite() || !eps_.allFinite()) {
      throw ArgumentError("sample set contains non-finite entries");
    }
    if ((eps_.array() < Scalar(0)).any()) throw ArgumentError("error bounds eps must be nonnegative");
    if (!(tol_ >= Scalar(0))) throw ArgumentError("tolerance must be nonnegative");
    for (Eigen::Index m = 0; m < sites_.cols(); ++m) {
      if (!domain_contains(domain_, sites_.col(m), tol_)) {
        throw ArgumentError("site " + std::to_string(m + 1) + " lies outside the domain");
      }
    }
  }

  /// Same sites with every eps_m equal to `eps`.
  static SampleSet uniform(PointSet<Scalar> sites, Vector<Scalar> values, Scalar eps, Scalar alpha,
                           Domain domain) {
    const Eigen::Index m = sites.cols();
    return SampleSet(std::move(sites), std::move(values), Vector<Scalar>::Constant(m, eps), alpha,
                     domain);
  }

  const PointSet<Scalar>& sites() const { return sites_; }
  auto site(Eigen::Index m) const { return sites_.col(m); }
  const Vector<Scalar>& values() const { return values_; }
  const Vector<Scalar>& eps() const { return eps_; }
  Scalar alpha() const { return alpha_; }
  const Domain& domain() const { return domain_; }
  Metric metric() const { return domain_.metric; }
  Eigen::Index dim() const { return domain_.dim; }
  Eigen::Index size() const { return sites_.cols(); }
  Scalar tol() const { return tol_; }

  SampleSet with_values(Vector<Scalar> values) const {
    return SampleSet(sites_, std::move(values), eps_, alpha_, domain_, tol_);
  }
  SampleSet with_eps(Vector<Scalar> eps) const {
    return SampleSet(sites_, values_, std::move(eps), alpha_, domain_, tol_);
  }
  /// The zero-data instance y = 0 with the same sites and error bounds.
  SampleSet zero_data() const { return with_values(Vector<Scalar>::Zero(size())); }

  bool common_eps() const {
    return (eps_.array() - eps_(0)).abs().maxCoeff() <= tol_;
  }

 private:
  PointSet<Scalar> sites_;
  Vector<Scalar> values_;
  Vector<Scalar> eps_;
  Scalar alpha_;
  Domain domain_;
  Scalar tol_;
};

/// Which envelope-type function to evaluate or maximize.
enum class Envelope {
  Lower,     // max_m (y_m - eps_m - dist^alpha)
  Upper,     // min_m (y_m + eps_m + dist^alpha)
  Fill,      // min_m dist^alpha
  ZeroData,  // min_m (eps_m + dist^alpha), the upper envelope of the zero-data instance
};

inline std::string_view to_string(Envelope which) {
  switch (which) {
    case Envelope::Lower: return "lower";
    case Envelope::Upper: return "upper";
    case Envelope::Fill: return "fill";
    case Envelope::ZeroData: return "zero_data_upper";
  }
  return "?";
}

namespace detail {

template <typename Scalar, typename Derived>
Scalar envelope_unchecked(const SampleSet<Scalar>& s, Envelope which,
                          const Eigen::MatrixBase<Derived>& x) {
  const auto& sites = s.sites();
  const auto& y = s.values();
  const auto& eps = s.eps();
  const Metric metric = s.metric();
  const Scalar alpha = s.alpha();
  if (which == Envelope::Lower) {
    Scalar best = -std::numeric_limits<Scalar>::infinity();
    for (Eigen::Index m = 0; m < sites.cols(); ++m) {
      best = std::max(best, y(m) - eps(m) - holder_dist(sites.col(m), x, metric, alpha));
    }
    return best;
  }
  Scalar best = std::numeric_limits<Scalar>::infinity();
  for (Eigen::Index m = 0; m < sites.cols(); ++m) {
    const Scalar r = holder_dist(sites.col(m), x, metric, alpha);
    Scalar v = r;
    if (which == Envelope::Upper) v += y(m) + eps(m);
    else if (which == Envelope::ZeroData) v += eps(m);
    best = std::min(best, v);
  }
  return best;
}

template <typename Scalar, typename Derived>
void require_in_domain(const SampleSet<Scalar>& s, const Eigen::MatrixBase<Derived>& x) {
  if (!domain_contains(s.domain(), x, s.tol())) throw ArgumentError("query point lies outside the domain");
}

}  // namespace detail

template <typename Scalar, typename Derived>
Scalar eval_envelope(const SampleSet<Scalar>& s, Envelope which, const Eigen::MatrixBase<Derived>& x) {
  detail::require_in_domain(s, x);
  return detail::envelope_unchecked(s, which, x);
}

/// Pointwise largest value any data- and model-consistent function can take.
template <typename Scalar, typename Derived>
Scalar eval_lower(const SampleSet<Scalar>& s, const Eigen::MatrixBase<Derived>& x) {
  return eval_envelope(s, Envelope::Lower, x);
}

template <typename Scalar, typename Derived>
Scalar eval_upper(const SampleSet<Scalar>& s, const Eigen::MatrixBase<Derived>& x) {
  return eval_envelope(s, Envelope::Upper, x);
}

/// u for the zero-data instance: min_m (eps_m + dist(x, x_m)^alpha).
template <typename Scalar, typename Derived>
Scalar eval_zero_data_upper(const SampleSet<Scalar>& s, const Eigen::MatrixBase<Derived>& x) {
  return eval_envelope(s, Envelope::ZeroData, x);
}

/// Fill function U(x) = min_m dist(x, x_m)^alpha.
template <typename DS, typename DX>
typename DS::Scalar eval_fill(const Eigen::MatrixBase<DS>& sites, typename DS::Scalar alpha,
                              Metric metric, const Eigen::MatrixBase<DX>& x) {
  using Scalar = typename DS::Scalar;
  if (sites.cols() == 0) throw ArgumentError("fill function needs at least one site");
  if (sites.rows() != x.size()) throw ArgumentError("dimension mismatch between sites and query point");
  detail::require_alpha(alpha);
  Scalar best = std::numeric_limits<Scalar>::infinity();
  for (Eigen::Index m = 0; m < sites.cols(); ++m) {
    best = std::min(best, detail::holder_dist(sites.col(m), x, metric, alpha));
  }
  return best;
}

template <typename Scalar, typename Derived>
Scalar eval_fill(const SampleSet<Scalar>& s, const Eigen::MatrixBase<Derived>& x) {
  return eval_envelope(s, Envelope::Fill, x);
}

template <typename Scalar = double>
struct EnvelopeEval {
  Scalar lower;
  Scalar upper;
  Scalar fill;
  Point<Scalar> at;
};

template <typename Scalar, typename Derived>
EnvelopeEval<Scalar> evaluate_envelopes(const SampleSet<Scalar>& s, const Eigen::MatrixBase<Derived>& x) {
  detail::require_in_domain(s, x);
  return {detail::envelope_unchecked(s, Envelope::Lower, x), detail::envelope_unchecked(s, Envelope::Upper, x),
          detail::envelope_unchecked(s, Envelope::Fill, x), Point<Scalar>(x)};
}

/// Evaluates one envelope at every column of `points` (no domain check).
template <typename Scalar>
Vector<Scalar> eval_envelope_batch(const SampleSet<Scalar>& s, Envelope which,
                                   const PointSet<Scalar>& points) {
  Vector<Scalar> out(points.cols());
  for (Eigen::Index j = 0; j < points.cols(); ++j) out(j) = detail::envelope_unchecked(s, which, points.col(j));
  return out;
}

/// True iff some Hölder function matches every sample within its error bound,
/// i.e. |y_m - y_n| <= eps_m + eps_n + dist(x_m, x_n)^alpha for all m, n.
template <typename Scalar>
bool check_admissible(const SampleSet<Scalar>& s) {
  const auto& y = s.values();
  const auto& eps = s.eps();
  for (Eigen::Index m = 0; m < s.size(); ++m) {
    for (Eigen::Index n = m + 1; n < s.size(); ++n) {
      const Scalar slack = eps(m) + eps(n) +
                           detail::holder_dist(s.site(m), s.site(n), s.metric(), s.alpha());
      if (std::abs(y(m) - y(n)) > slack + s.tol()) return false;
    }
  }
  return true;
}

template <typename Scalar>
void require_admissible(const SampleSet<Scalar>& s) {
  const auto& y = s.values();
  const auto& eps = s.eps();
  for (Eigen::Index m = 0; m < s.size(); ++m) {
    for (Eigen::Index n = m + 1; n < s.size(); ++n) {
      const Scalar slack = eps(m) + eps(n) +
                           detail::holder_dist(s.site(m), s.site(n), s.metric(), s.alpha());
      if (std::abs(y(m) - y(n)) > slack + s.tol()) {
        throw InadmissibleError("inadmissible data: |y_" + std::to_string(m + 1) + " - y_" +
                                std::to_string(n + 1) + "| = " + std::to_string(double(std::abs(y(m) - y(n)))) +
                                " exceeds eps_m + eps_n + dist^alpha = " + std::to_string(double(slack)));
      }
    }
  }
}

/// True iff |v_i - v_j| <= dist(p_i, p_j)^alpha for every pair of samples.
template <typename Scalar>
bool check_holder(const PointSet<Scalar>& points, const Vector<Scalar>& values, Scalar alpha,
                  Metric metric, Scalar tol = Scalar(1e-12)) {
  if (points.cols() != values.size()) throw ArgumentError("points and values must have equal lengths");
  detail::require_alpha(alpha);
  for (Eigen::Index i = 0; i < points.cols(); ++i) {
    for (Eigen::Index j = i + 1; j < points.cols(); ++j) {
      if (std::abs(values(i) - values(j)) >
          detail::holder_dist(points.col(i), points.col(j), metric, alpha) + tol) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace optrec

#pragma once

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

#include "optrec/envelopes.hpp"
#include "optrec/random.hpp"

namespace optrec {

/// How each constraint value is pinned inside its feasible interval.
enum class Clamp { Random, Upper, Lower };

/// A Hölder function given by cones over anchor points:
///   upper form  f(x) = min_k (v_k + dist(x, w_k)^alpha)
///   lower form  f(x) = max_k (v_k - dist(x, w_k)^alpha)
template <typename Scalar = double>
class ConsistentFunction {
 public:
  enum class Form { UpperCones, LowerCones };

  ConsistentFunction(PointSet<Scalar> anchors, Vector<Scalar> values, Scalar alpha, Metric metric, Form form)
      : anchors_(std::move(anchors)), values_(std::move(values)), alpha_(alpha), metric_(metric), form_(form) {}

  template <typename Derived>
  Scalar operator()(const Eigen::MatrixBase<Derived>& x) const {
    if (form_ == Form::UpperCones) {
      Scalar best = std::numeric_limits<Scalar>::infinity();
      for (Eigen::Index k = 0; k < anchors_.cols(); ++k) {
        best = std::min(best, values_(k) + detail::holder_dist(anchors_.col(k), x, metric_, alpha_));
      }
      return best;
    }
    Scalar best = -std::numeric_limits<Scalar>::infinity();
    for (Eigen::Index k = 0; k < anchors_.cols(); ++k) {
      best = std::max(best, values_(k) - detail::holder_dist(anchors_.col(k), x, metric_, alpha_));
    }
    return best;
  }

  const PointSet<Scalar>& anchors() const { return anchors_; }
  const Vector<Scalar>& values() const { return values_; }
  Form form() const { return form_; }

 private:
  PointSet<Scalar> anchors_;
  Vector<Scalar> values_;
  Scalar alpha_;
  Metric metric_;
  Form form_;
};

/// f_t = (1 - t) * lower + t * upper; consistent for every t in [0, 1].
template <typename Scalar = double>
class EnvelopeMixture {
 public:
  EnvelopeMixture(const SampleSet<Scalar>& s, Scalar t) : s_(&s), t_(t) {
    if (!(t >= Scalar(0) && t <= Scalar(1))) throw ArgumentError("mixture weight must lie in [0, 1]");
  }

  template <typename Derived>
  Scalar operator()(const Eigen::MatrixBase<Derived>& x) const {
    return (Scalar(1) - t_) * detail::envelope_unchecked(*s_, Envelope::Lower, x) +
           t_ * detail::envelope_unchecked(*s_, Envelope::Upper, x);
  }

  Scalar weight() const { return t_; }

 private:
  const SampleSet<Scalar>* s_;
  Scalar t_;
};

/// Draws a function that is Hölder with constant 1 and matches every sample
/// within its error bound.
///
/// Constraints are pinned one at a time: first the datasites (values in
/// [y_m - eps_m, y_m + eps_m]), then `n_extra` random domain points. Each
/// value is chosen inside the interval spanned by the envelopes of the
/// constraints pinned so far, which keeps the constraint set admissible.
/// With n_extra = 0, Clamp::Upper reproduces the upper envelope and
/// Clamp::Lower the lower envelope.
template <typename Scalar>
ConsistentFunction<Scalar> generate_consistent_function(const SampleSet<Scalar>& s, Eigen::Index n_extra,
                                                        Rng& rng, Clamp clamp = Clamp::Random) {
  require_admissible(s);
  if (n_extra < 0) throw ArgumentError("n_extra must be nonnegative");
  const Eigen::Index M = s.size();
  const Eigen::Index total = M + n_extra;
  const Metric metric = s.metric();
  const Scalar alpha = s.alpha();

  PointSet<Scalar> pts(s.dim(), total);
  Vector<Scalar> val(total), eps(total);
  pts.leftCols(M) = s.sites();
  val.head(M) = s.values();
  eps.head(M) = s.eps();

  // Envelope bounds at p from the first `count` constraints.
  auto bounds = [&](const auto& p, Eigen::Index count) {
    Scalar lo = -std::numeric_limits<Scalar>::infinity();
    Scalar hi = std::numeric_limits<Scalar>::infinity();
    for (Eigen::Index k = 0; k < count; ++k) {
      const Scalar r = detail::holder_dist(pts.col(k), p, metric, alpha);
      lo = std::max(lo, val(k) - eps(k) - r);
      hi = std::min(hi, val(k) + eps(k) + r);
    }
    return std::pair{lo, hi};
  };
  auto pin = [&](Scalar lo, Scalar hi) {
    if (hi < lo) return (lo + hi) / Scalar(2);
    switch (clamp) {
      case Clamp::Upper: return hi;
      case Clamp::Lower: return lo;
      case Clamp::Random: break;
    }
    return lo + (hi - lo) * Scalar(rng.uniform());
  };

  for (Eigen::Index m = 0; m < M; ++m) {
    const auto [lo, hi] = bounds(pts.col(m), M);
    val(m) = pin(lo, hi);
    eps(m) = Scalar(0);
  }
  for (Eigen::Index k = M; k < total; ++k) {
    pts.col(k) = random_domain_point<Scalar>(s.domain(), rng);
    const auto [lo, hi] = bounds(pts.col(k), k);
    val(k) = pin(lo, hi);
    eps(k) = Scalar(0);
  }

  using Form = typename ConsistentFunction<Scalar>::Form;
  Form form = Form::UpperCones;
  if (clamp == Clamp::Lower || (clamp == Clamp::Random && rng.coin())) form = Form::LowerCones;
  return ConsistentFunction<Scalar>(std::move(pts), std::move(val), alpha, metric, form);
}

}  // namespace optrec

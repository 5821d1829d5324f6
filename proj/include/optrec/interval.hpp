#pragma once

#include <algorithm>
#include <cmath>

namespace optrec {

/// Closed interval [lo, hi]. Quantities that are only known up to a certified
/// bracket travel as intervals; exactly known ones have lo == hi.
template <typename Scalar = double>
struct Interval {
  Scalar lo{0};
  Scalar hi{0};

  static constexpr Interval point(Scalar v) { return {v, v}; }

  constexpr Scalar mid() const { return (lo + hi) / Scalar(2); }
  constexpr Scalar width() const { return hi - lo; }
  constexpr bool degenerate() const { return lo == hi; }
  constexpr bool contains(Scalar v, Scalar tol = Scalar(0)) const {
    return v >= lo - tol && v <= hi + tol;
  }

  friend constexpr Interval operator+(Interval a, Interval b) { return {a.lo + b.lo, a.hi + b.hi}; }
  friend constexpr Interval operator+(Interval a, Scalar c) { return {a.lo + c, a.hi + c}; }
  friend constexpr Interval operator-(Interval a, Scalar c) { return {a.lo - c, a.hi - c}; }
  friend constexpr Interval operator*(Scalar c, Interval a) {
    return c >= Scalar(0) ? Interval{c * a.lo, c * a.hi} : Interval{c * a.hi, c * a.lo};
  }
};

/// Smallest distance between points of two intervals (0 when they overlap).
template <typename Scalar>
constexpr Scalar gap(const Interval<Scalar>& a, const Interval<Scalar>& b) {
  return std::max({Scalar(0), a.lo - b.hi, b.lo - a.hi});
}

/// Largest distance between points of two intervals.
template <typename Scalar>
constexpr Scalar spread(const Interval<Scalar>& a, const Interval<Scalar>& b) {
  return std::max(a.hi - b.lo, b.hi - a.lo);
}

}  // namespace optrec

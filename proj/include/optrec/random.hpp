#pragma once

#include <cstdint>
#include <random>

#include "optrec/geometry.hpp"

namespace optrec {

/// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seedable, splittable generator. `split(k)` depends only on the seed and k,
/// so per-trial streams do not depend on the order trials are run in.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

  std::uint64_t seed() const { return seed_; }

  Rng split(std::uint64_t stream) const { return Rng(splitmix64(seed_ ^ splitmix64(~stream))); }

  std::uint64_t bits() { return engine_(); }

  /// Uniform in [0, 1), built from the top 53 bits so results do not depend
  /// on the standard library's distribution implementation.
  double uniform() { return double(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  /// Uniform integer in [lo, hi].
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    const auto span = std::uint64_t(hi - lo) + 1;
    return lo + std::int64_t(engine_() % span);
  }

  bool coin() { return (engine_() >> 63) != 0; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// Uniform sample from the domain (rejection from the enclosing cube).
template <typename Scalar = double>
Point<Scalar> random_domain_point(const Domain& dom, Rng& rng) {
  Point<Scalar> x(dom.dim);
  do {
    for (Eigen::Index i = 0; i < dom.dim; ++i) x(i) = Scalar(rng.uniform(-1.0, 1.0));
  } while (norm(x, dom.metric) > Scalar(1));
  return x;
}

}  // namespace optrec

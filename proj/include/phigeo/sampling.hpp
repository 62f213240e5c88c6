#pragma once

#include <cstdint>
#include <random>

#include "phigeo/deform.hpp"

namespace phigeo {

/// Deterministic 64-bit generator for sweeps; the draws do not depend on the
/// standard library's distribution implementations.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Flat Dirichlet draw on the n-simplex, rejected until every entry >= min_entry.
  ProbVec simplex(std::size_t n, double min_entry = 0.05);

 private:
  std::mt19937_64 rng_;
};

}  // namespace phigeo

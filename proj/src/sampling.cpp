#include "phigeo/sampling.hpp"

#include <cmath>
#include <vector>

#include "phigeo/error.hpp"

namespace phigeo {

double Sampler::uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

ProbVec Sampler::simplex(std::size_t n, double min_entry) {
  if (n < 2) throw DomainError("Sampler::simplex: n must be >= 2");
  if (!(min_entry >= 0.0) || min_entry * static_cast<double>(n) >= 1.0)
    throw DomainError("Sampler::simplex: min_entry * n must be below 1");
  std::vector<double> p(n);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    double sum = 0.0;
    for (auto& v : p) {
      v = -std::log1p(-uniform());
      sum += v;
    }
    double acc = 0.0;
    bool ok = true;
    for (std::size_t i = 1; i < n; ++i) {
      p[i] /= sum;
      acc += p[i];
      ok = ok && p[i] >= min_entry;
    }
    p[0] = 1.0 - acc;
    if (ok && p[0] >= min_entry) return ProbVec(p);
  }
  throw NonConvergence("Sampler::simplex: rejection sampling did not accept a point");
}

}  // namespace phigeo

#pragma once

// Deterministic randomness. One root seed; per-purpose child streams derived
// by fixed labeled splits, so e.g. changing the resample count can never
// perturb round generation. The engine is std::mt19937_64 (its output stream
// is pinned by the standard); all mappings from engine output to variates are
// implemented here rather than with std::*_distribution, which is
// implementation-defined and would break byte-identical reproducibility.

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace cqkd {

std::uint64_t fnv1a64(std::string_view data);
std::uint64_t splitmix64(std::uint64_t& state);

class Rng {
 public:
  // Child stream `label`/`index` of the given root seed.
  static Rng child(std::uint64_t root_seed, std::string_view label, std::uint64_t index = 0);

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0,1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Unbiased uniform integer in [0, n) via masked rejection.
  std::uint32_t uniform_below(std::uint32_t n);

  // Index sampled from an unnormalized weight vector (linear inverse CDF).
  std::size_t sample_pmf(const std::vector<double>& pmf);

  // Poisson variate; sequential inversion for small means, PTRD rejection
  // (Hormann) for large ones.
  std::uint64_t poisson(double lambda);

  // Binomial variate by mode-centered inverse CDF walk.
  std::uint64_t binomial(std::uint64_t n, double p);

 private:
  explicit Rng(std::uint64_t seed);
  std::mt19937_64 engine_;
};

}  // namespace cqkd

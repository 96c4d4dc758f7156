#include "cqkd/rng.hpp"

#include <cmath>
#include <stdexcept>

#include "cqkd/tolerances.hpp"

namespace cqkd {

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

Rng Rng::child(std::uint64_t root_seed, std::string_view label, std::uint64_t index) {
  std::uint64_t state = root_seed ^ fnv1a64(label) ^ (index * 0x9e3779b97f4a7c15ULL);
  // A couple of mixing rounds so nearby roots/indices give unrelated streams.
  splitmix64(state);
  return Rng(splitmix64(state));
}

std::uint32_t Rng::uniform_below(std::uint32_t n) {
  if (n == 0) throw std::logic_error("uniform_below(0)");
  if ((n & (n - 1)) == 0) return static_cast<std::uint32_t>(engine_() & (n - 1));
  std::uint32_t mask = n - 1;
  mask |= mask >> 1;
  mask |= mask >> 2;
  mask |= mask >> 4;
  mask |= mask >> 8;
  mask |= mask >> 16;
  for (;;) {
    const auto v = static_cast<std::uint32_t>(engine_() & mask);
    if (v < n) return v;
  }
}

std::size_t Rng::sample_pmf(const std::vector<double>& pmf) {
  double total = 0;
  for (double p : pmf) total += p;
  double u = uniform01() * total;
  for (std::size_t i = 0; i < pmf.size(); ++i) {
    u -= pmf[i];
    if (u < 0) return i;
  }
  return pmf.size() - 1;
}

std::uint64_t Rng::poisson(double lambda) {
  if (lambda < 0) throw ValidationError("poisson: negative mean");
  if (lambda == 0) return 0;
  if (lambda < 45.0) {
    // Sequential inversion; exp(-45) is still comfortably above underflow.
    const double l = std::exp(-lambda);
    std::uint64_t k = 0;
    double prod = uniform01();
    while (prod > l) {
      ++k;
      prod *= uniform01();
    }
    return k;
  }
  // PTRD (Hormann's transformed rejection).
  const double b = 0.931 + 2.53 * std::sqrt(lambda);
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  const double log_lambda = std::log(lambda);
  for (;;) {
    double u = uniform01() - 0.5;
    double v = uniform01();
    const double us = 0.5 - std::abs(u);
    const auto k = static_cast<long long>(std::floor((2.0 * a / us + b) * u + lambda + 0.43));
    if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(k);
    if (k < 0 || (us < 0.013 && v > us)) continue;
    const double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
    const double rhs = k * log_lambda - lambda - std::lgamma(static_cast<double>(k) + 1.0);
    if (lhs <= rhs) return static_cast<std::uint64_t>(k);
  }
}

std::uint64_t Rng::binomial(std::uint64_t n, double p) {
  if (p < 0 || p > 1) throw ValidationError("binomial: p outside [0,1]");
  if (n == 0 || p == 0) return 0;
  if (p == 1) return n;
  // Walk the CDF outward from the mode. O(sqrt(n p (1-p))) expected steps.
  const double dn = static_cast<double>(n);
  const auto mode = static_cast<std::uint64_t>(std::floor((dn + 1.0) * p));
  auto log_pmf = [&](std::uint64_t k) {
    const double dk = static_cast<double>(k);
    return std::lgamma(dn + 1.0) - std::lgamma(dk + 1.0) - std::lgamma(dn - dk + 1.0) +
           dk * std::log(p) + (dn - dk) * std::log1p(-p);
  };
  const double pm = std::exp(log_pmf(mode));
  const double u = uniform01();
  double acc = pm;
  if (u < acc) return mode;
  // Alternate between right and left tails, extending ratios incrementally.
  double right = pm, left = pm;
  std::uint64_t hi = mode, lo = mode;
  for (;;) {
    bool advanced = false;
    if (hi < n) {
      ++hi;
      right *= (dn - static_cast<double>(hi) + 1.0) / static_cast<double>(hi) * p / (1.0 - p);
      acc += right;
      if (u < acc) return hi;
      advanced = true;
    }
    if (lo > 0) {
      left *= static_cast<double>(lo) / (dn - static_cast<double>(lo) + 1.0) * (1.0 - p) / p;
      --lo;
      acc += left;
      if (u < acc) return lo;
      advanced = true;
    }
    if (!advanced) return mode;  // numeric leftovers; u was ~1
  }
}

}  // namespace cqkd

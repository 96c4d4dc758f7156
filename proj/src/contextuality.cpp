#include "cqkd/contextuality.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <numbers>
#include <sstream>

namespace cqkd {

void Strategy::validate(const Tolerances& tol) const {
  for (int x = 0; x <= 8; ++x) {
    if (!is_density_operator(preparations[x], tol)) {
      throw ValidationError("strategy: preparation " + std::to_string(x) +
                            " is not a valid density operator");
    }
  }
  for (int y = 1; y <= 8; ++y) {
    if (!is_povm_element(m0(y), tol)) {
      throw ValidationError("strategy: measurement " + std::to_string(y) +
                            " is not a valid POVM element");
    }
  }
}

void CorrelationTable::set_p0(int x, int y, double p0) {
  if (x < 0 || x > 8 || y < 1 || y > 8) throw ValidationError("table: index out of range");
  if (p0 < -tolerances().table_complement || p0 > 1.0 + tolerances().table_complement) {
    throw ValidationError("table: probability outside [0,1]");
  }
  p0_[x][y - 1] = std::clamp(p0, 0.0, 1.0);
  present_[x][y - 1] = true;
}

void CorrelationTable::set_counts(int x, int y, std::uint64_t n0, std::uint64_t n1) {
  if (n0 + n1 == 0) throw ValidationError("table: zero total count");
  set_p0(x, y, static_cast<double>(n0) / static_cast<double>(n0 + n1));
  n0_[x][y - 1] = n0;
  n1_[x][y - 1] = n1;
  has_counts_ = true;
}

double CorrelationTable::p0(int x, int y) const {
  if (!has(x, y)) throw ValidationError("table: entry (" + std::to_string(x) + "," +
                                        std::to_string(y) + ") is absent");
  return p0_[x][y - 1];
}

std::vector<std::pair<int, int>> CorrelationTable::missing_pairs(const ExtendedGraph& g) const {
  std::vector<std::pair<int, int>> missing;
  for (int x = 1; x <= 8; ++x) {
    if (!has(x, x)) missing.emplace_back(x, x);
    for (int y : g.neighbors(x))
      if (!has(x, y)) missing.emplace_back(x, y);
  }
  for (int y = 1; y <= 5; ++y)
    if (!has(0, y)) missing.emplace_back(0, y);
  return missing;
}

std::array<Vec3c, 5> kcbs_vectors() {
  const double c = std::cos(std::numbers::pi / 5.0);
  const double cos_theta = std::sqrt(c / (1.0 + c));
  const double sin_theta = std::sqrt(1.0 - c / (1.0 + c));
  std::array<Vec3c, 5> v;
  for (int k = 0; k < 5; ++k) {
    const double phi = 4.0 * std::numbers::pi * k / 5.0;
    v[k] = Vec3c(cos_theta, sin_theta * std::cos(phi), sin_theta * std::sin(phi));
  }
  return v;
}

namespace {

// Unit vector orthogonal to two real rays, global phase fixed so the first
// nonzero amplitude is real positive.
Vec3c completion_ray(const Vec3c& a, const Vec3c& b) {
  Vec3c w = a.conjugate().cross(b.conjugate());
  w.normalize();
  for (int i = 0; i < 3; ++i) {
    if (std::abs(w(i)) > 1e-12) {
      w *= std::conj(w(i)) / std::abs(w(i));
      break;
    }
  }
  return w;
}

}  // namespace

Strategy ideal_strategy() {
  const auto v = kcbs_vectors();
  Strategy s;
  s.preparations[0] = projector(Vec3c(1, 0, 0));
  for (int x = 1; x <= 5; ++x) s.preparations[x] = projector(v[x - 1]);
  // Vertices 6, 7, 8 complete the contexts {2,3}, {4,5}, {1,5}.
  s.preparations[6] = projector(completion_ray(v[1], v[2]));
  s.preparations[7] = projector(completion_ray(v[3], v[4]));
  s.preparations[8] = projector(completion_ray(v[0], v[4]));
  for (int y = 1; y <= 8; ++y) s.measurements[y - 1] = s.preparations[y];
  return s;
}

CorrelationTable born_correlations(const Strategy& s, const Tolerances& tol) {
  s.validate(tol);
  CorrelationTable t;
  for (int x = 0; x <= 8; ++x) {
    for (int y = 1; y <= 8; ++y) {
      const double p = trace_real(s.rho(x) * s.m0(y));
      t.set_p0(x, y, std::clamp(p, 0.0, 1.0));
    }
  }
  return t;
}

WitnessReport evaluate_witness(const CorrelationTable& table, const ExtendedGraph& g) {
  const auto missing = table.missing_pairs(g);
  if (!missing.empty()) {
    std::ostringstream os;
    os << "witness: table is missing " << missing.size() << " required (x,y) pairs:";
    for (auto [x, y] : missing) os << " (" << x << "," << y << ")";
    throw ValidationError(os.str());
  }
  WitnessReport r;
  r.quantum_reference = 30.0 + std::sqrt(5.0);
  for (int x = 1; x <= 8; ++x) {
    const double d = table.p0(x, x);
    r.terms.push_back({WitnessTerm::Kind::diagonal, x, x, d});
    r.S1 += d;
    for (int y : g.neighbors(x)) {
      const double e = table.p1(x, y);
      r.terms.push_back({WitnessTerm::Kind::edge, x, y, e});
      r.S1 += e;
    }
  }
  for (int y = 1; y <= 5; ++y) {
    const double k = table.p0(0, y);
    r.terms.push_back({WitnessTerm::Kind::kcbs, 0, y, k});
    r.S2 += k;
  }
  r.S = r.S1 + r.S2;
  r.S_normalized = r.S / 35.0;
  r.violation = r.S > r.classical_bound;
  return r;
}

ClassicalValue classical_value_for_assignment(const std::array<int, 8>& masks,
                                              const ExtendedGraph& g) {
  ClassicalValue v;
  // Preparations decouple once the measurement assignment is fixed.
  for (int x = 1; x <= 8; ++x) {
    int best = 0;
    for (int m = 0; m < 3; ++m) {
      int s = (masks[x - 1] >> m) & 1;
      for (int y : g.neighbors(x)) s += 1 - ((masks[y - 1] >> m) & 1);
      best = std::max(best, s);
    }
    v.s1 += best;
  }
  int best0 = 0;
  for (int m = 0; m < 3; ++m) {
    int s = 0;
    for (int y = 1; y <= 5; ++y) s += (masks[y - 1] >> m) & 1;
    best0 = std::max(best0, s);
  }
  v.s2 = best0;
  return v;
}

namespace {

int bruteforce_range(const ExtendedGraph& g, long begin, long end) {
  // Flattened neighbor lists; the hot loop only touches these.
  std::array<std::array<int, 4>, 8> nbr{};
  std::array<int, 8> deg{};
  for (int x = 1; x <= 8; ++x) {
    const auto& ns = g.neighbors(x);
    deg[x - 1] = static_cast<int>(ns.size());
    for (size_t i = 0; i < ns.size(); ++i) nbr[x - 1][i] = ns[i] - 1;
  }
  int best = 0;
  std::array<int, 8> mask{};
  for (long idx = begin; idx < end; ++idx) {
    long v = idx;
    for (int y = 0; y < 8; ++y) {
      mask[y] = static_cast<int>(v & 7);
      v >>= 3;
    }
    int total = 0;
    for (int x = 0; x < 8; ++x) {
      int bx = 0;
      for (int m = 0; m < 3; ++m) {
        int s = (mask[x] >> m) & 1;
        for (int i = 0; i < deg[x]; ++i) s += 1 - ((mask[nbr[x][i]] >> m) & 1);
        if (s > bx) bx = s;
      }
      total += bx;
    }
    int b0 = 0;
    for (int m = 0; m < 3; ++m) {
      int s = 0;
      for (int y = 0; y < 5; ++y) s += (mask[y] >> m) & 1;
      if (s > b0) b0 = s;
    }
    total += b0;
    if (total > best) best = total;
  }
  return best;
}

}  // namespace

int classical_bound_bruteforce(const ExtendedGraph& g, int workers) {
  if (workers <= 0) {
    const char* env = std::getenv("CQKD_WORKERS");
    workers = env ? std::max(1, std::atoi(env)) : 1;
  }
  const long total = 8L * 8 * 8 * 8 * 8 * 8 * 8 * 8;
  if (workers == 1) return bruteforce_range(g, 0, total);
  std::vector<std::future<int>> parts;
  const long chunk = (total + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const long b = w * chunk, e = std::min(total, b + chunk);
    if (b >= e) break;
    parts.push_back(std::async(std::launch::async, bruteforce_range, std::cref(g), b, e));
  }
  int best = 0;
  for (auto& p : parts) best = std::max(best, p.get());
  return best;
}

}  // namespace cqkd

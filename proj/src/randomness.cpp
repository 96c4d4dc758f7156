#include "cqkd/randomness.hpp"

#include <algorithm>
#include <cmath>

#include "cqkd/security.hpp"

namespace cqkd {

namespace {

constexpr double kConstraintTol = 1e-6;
const double kSqrt5 = std::sqrt(5.0);

struct Candidate {
  double pstar = -1;
  Strategy strategy;
};

// Evaluate a candidate strategy through the witness pipeline and keep it only
// if it really reproduces the targets; pstar is recomputed from the table.
void consider(Candidate& best, const Strategy& s, double S1t, double S2t,
              const ExtendedGraph& g) {
  const CorrelationTable t = born_correlations(s);
  const WitnessReport w = evaluate_witness(t, g);
  if (std::abs(w.S1 - S1t) > kConstraintTol || std::abs(w.S2 - S2t) > kConstraintTol) return;
  double pstar = 0;
  for (int y = 1; y <= 5; ++y) pstar = std::max({pstar, t.p0(0, y), t.p1(0, y)});
  if (pstar > best.pstar) {
    best.pstar = pstar;
    best.strategy = s;
  }
}

// Ideal-KCBS family: exact strategy, free rho_0 = |phi><phi| with
// |<e0|phi>|^2 pinned by the S2 constraint (Sum_y Pi_y = sqrt5 P0 + lam (I-P0)).
void search_ideal_family(Candidate& best, double S1t, double S2t, const ExtendedGraph& g) {
  if (std::abs(S1t - 30.0) > kConstraintTol) return;
  const double lam = (5.0 - kSqrt5) / 2.0;
  const double w = (S2t - lam) / (kSqrt5 - lam);
  if (w < -1e-12 || w > 1.0 + 1e-12) return;
  const double wc = std::clamp(w, 0.0, 1.0);

  const auto v = kcbs_vectors();
  const Vec3c e0(1, 0, 0);
  const double cos_t = std::sqrt(1.0 / kSqrt5);
  const double sin_t = std::sqrt(1.0 - 1.0 / kSqrt5);
  // v5 = cos_t e0 + sin_t u; u_perp completes the orthonormal triple.
  const Vec3c u = ((v[4] - cos_t * e0) / sin_t).normalized();
  const Vec3c u_perp = e0.conjugate().cross(u.conjugate()).normalized();

  auto phi_for = [&](double z) {
    return (std::sqrt(wc) * e0 +
            std::sqrt(1.0 - wc) * (z * u + std::sqrt(std::max(0.0, 1.0 - z * z)) * u_perp))
        .normalized();
  };
  // Push t_5 down (z < 0) or up (z = 1); both extremes are p* candidates.
  const double ratio = sin_t * std::sqrt(1.0 - wc) > 0
                           ? cos_t * std::sqrt(wc) / (sin_t * std::sqrt(1.0 - wc))
                           : 2.0;  // w = 1: phi = e0 whatever z is
  for (double z : {-std::min(1.0, ratio), 1.0}) {
    Strategy s = ideal_strategy();
    s.preparations[0] = projector(phi_for(z));
    consider(best, s, S1t, S2t, g);
  }
}

// Coloring alpha-family: reference-coloring basis preparations, vertex 1..4
// measurements rotated by alpha in the 01-plane (S1 = 30 - 12 sin^2 alpha),
// rho_0 = (fa, fb e^{i gamma}, fc) swept over the S2 constraint set.
void search_coloring_family(Candidate& best, double S1t, double S2t,
                            const ExtendedGraph& g) {
  const double sin_sq = (30.0 - S1t) / 12.0;
  if (sin_sq < -1e-12 || sin_sq > 1.0 + 1e-12) return;
  const double sa = std::sqrt(std::clamp(sin_sq, 0.0, 1.0));
  const double ca = std::sqrt(1.0 - std::clamp(sin_sq, 0.0, 1.0));
  const double sin2a = 2.0 * sa * ca;

  auto build = [&](double fa, double fb, double fc, double cos_g) {
    Strategy s = sm_attack_strategy();  // reference coloring + M5..M8
    const Vec3c m13(ca, -sa, 0.0), m24(-sa, ca, 0.0);
    s.measurements[0] = s.measurements[2] = projector(m13);
    s.measurements[1] = s.measurements[3] = projector(m24);
    const double sin_g = std::sqrt(std::max(0.0, 1.0 - cos_g * cos_g));
    const Vec3c phi(fa, fb * Complex(cos_g, sin_g), fc);
    s.preparations[0] = projector(phi.normalized());
    return s;
  };

  // S2 = 2 - fc^2 - 4 k sin2a with k = fa fb cos(gamma).
  auto scan_fc2 = [&](double fc2) {
    const double srem = 1.0 - fc2;  // fa^2 + fb^2
    if (srem < 0) return;
    double k;
    if (sin2a < 1e-12) {
      if (std::abs(2.0 - fc2 - S2t) > kConstraintTol) return;
      k = 0.0;
    } else {
      k = (2.0 - fc2 - S2t) / (4.0 * sin2a);
      if (std::abs(k) > srem / 2.0 + 1e-15) return;  // needs fa fb >= |k|
    }
    // Sweep the fa^2 split; t_1/t_2 depend only on (fa^2, fb^2, k).
    const int kSplits = 200;
    for (int i = 0; i <= kSplits; ++i) {
      const double fa2 = srem * i / kSplits;
      const double fb2 = srem - fa2;
      if (fa2 * fb2 + 1e-15 < k * k) continue;
      const double fa = std::sqrt(fa2), fb = std::sqrt(fb2);
      const double cos_g = fa * fb > 1e-12 ? std::clamp(k / (fa * fb), -1.0, 1.0)
                                           : 0.0;
      if (fa * fb <= 1e-12 && std::abs(k) > 1e-12) continue;
      consider(best, build(fa, fb, std::sqrt(fc2), cos_g), S1t, S2t, g);
    }
  };
  const int kGrid = 80;
  for (int i = 0; i <= kGrid; ++i) scan_fc2(static_cast<double>(i) / kGrid);
}

}  // namespace

RandomnessReport randomness_bounds(double S1, double S2, const ExtendedGraph& g) {
  if (S1 > 30.0 + 1e-9 || S2 > 5.0 + 1e-9 || S1 < 0 || S2 < 0)
    throw ValidationError("randomness: (S1, S2) outside the witness range");

  RandomnessReport rep;
  rep.S1_target = S1;
  rep.S2_target = S2;

  rep.ideal_available = std::abs(S1 - 30.0) <= 1e-9 && S2 >= kSqrt5 - 1e-9;
  if (rep.ideal_available) rep.ideal_R = -std::log2(1.0 - 1.0 / kSqrt5);

  Candidate best;
  search_ideal_family(best, S1, S2, g);
  search_coloring_family(best, S1, S2, g);

  if (best.pstar >= 0) {
    rep.achievable_found = true;
    rep.achievable_pstar = best.pstar;
    rep.achievable_R = -std::log2(best.pstar);
    rep.achieving_strategy = best.strategy;
    if (best.pstar >= 1.0 - 1e-9) {
      rep.note = "a deterministic-outcome strategy reproduces (S1, S2): no certifiable randomness";
    }
  } else {
    rep.note = "no qutrit strategy found reproducing (S1, S2) within 1e-6; "
               "the pair appears infeasible";
  }
  return rep;
}

}  // namespace cqkd

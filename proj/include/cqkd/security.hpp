#pragma once

// Key-rate analysis under the probabilistic cloning attack: mutual
// information, the dephasing channel (analytic and explicit-unitary routes),
// proper-coloring enumeration, eigen-update SeeSaw maximization of the
// witness, and the key-rate-vs-S curve.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "cqkd/contextuality.hpp"
#include "cqkd/graph.hpp"

namespace cqkd {

struct JointDistribution2x2 {
  std::array<std::array<double, 2>, 2> p{};  // p[a][b]

  void validate(double tol = 1e-9) const;
  double marginal_a(int a) const { return p[a][0] + p[a][1]; }
  double marginal_b(int b) const { return p[0][b] + p[1][b]; }
};

// Shannon mutual information in bits, 0 log 0 = 0.
double mutual_information(const JointDistribution2x2& j);

// Eve's channel q * dephase(rho) + (1-q) * rho.
Mat3c eve_channel(const Mat3c& rho, double q, const Tolerances& tol = tolerances());

// Same channel through the explicit controlled-shift unitary on the
// 9-dimensional Bob (x) Eve space; used as the cross-check route.
Mat9c attack_unitary();
Mat3c eve_channel_via_unitary(const Mat3c& rho, double q,
                              const Tolerances& tol = tolerances());

// Attack structure: preparations pinned to the coloring's basis projectors,
// Eve measuring in the computational basis. A proper coloring makes Eve's
// guess of f(x,y) perfect on every key pair.
struct AttackModel {
  double q = 0;
  Coloring coloring = ExtendedGraph::reference_coloring();

  Mat3c eve_m0(int y) const;
  void validate(const ExtendedGraph& g = ExtendedGraph::standard()) const;
};

std::vector<Coloring> enumerate_colorings(const ExtendedGraph& g = ExtendedGraph::standard());

struct SeesawOptions {
  int restarts = 20;
  int max_iters = 500;
  double tol = 1e-10;
  std::uint64_t seed = 0;
};

struct SeesawResult {
  double S_max = 0;
  Strategy strategy;
  Coloring coloring{};
  bool converged = false;
  int iterations = 0;
};

// Maximize S over Bob's measurements and the free preparation rho_0, with
// rho_1..rho_8 pinned to the coloring's basis projectors (Eve's perfect-guess
// constraint). Alternates projector updates for the measurements with a
// top-eigenvector update for rho_0; every iterate is objective-monotone.
SeesawResult seesaw_max_S(double q, const Coloring& coloring,
                          const ExtendedGraph& g = ExtendedGraph::standard(),
                          const SeesawOptions& opts = {});

// Maximum over all proper colorings.
SeesawResult seesaw_max_S(double q, const ExtendedGraph& g = ExtendedGraph::standard(),
                          const SeesawOptions& opts = {});

struct KeyRateReport {
  double I_AB = 0;   // bits
  double I_AE = 0;   // bits
  double r = 0;      // I_AB - I_AE, bits per key round (may be negative)
  double overall = 0;  // P_k * r, bits per protocol round
  double S_achieved = 0;
};

inline constexpr double kKeyFraction = 30.0 / 144.0;  // P_k

// Key-round joints under the attack: (z,f) from Bob's effective Born
// probabilities uniformly over the 30 key pairs, (e,f) with e = f under the
// attack branch and e = 1 (the best blind guess) otherwise.
KeyRateReport evaluate_attack(double q, const Strategy& strategy, const AttackModel& attack,
                              const ExtendedGraph& g = ExtendedGraph::standard());

struct KeyRatePoint {
  double q, S_max, I_AB, I_AE, r, overall;
};

// Per q: seesaw_max_S, then evaluate_attack on the optimizing strategy.
// A pinned coloring keeps the curve on the reference attack family.
std::vector<KeyRatePoint> key_rate_vs_S(const std::vector<double>& q_grid,
                                        const std::optional<Coloring>& coloring,
                                        const SeesawOptions& opts = {},
                                        const ExtendedGraph& g = ExtendedGraph::standard(),
                                        int workers = 0);

// The explicit q = 0.54 attack strategy (basis-state preparations, rotated
// rank-1 measurements on vertices 1..4). The printed measurement off-diagonals
// pair with either sign of the rho_0 superposition; `maximize_sign` picks the
// sign that maximizes S (the consistent choice), false keeps the transcription
// as printed.
Strategy sm_attack_strategy(bool maximize_sign = true);
inline constexpr double kSmAttackQ = 0.54;

}  // namespace cqkd

#pragma once

// Photon-number statistics for deterministic single-photon and weak-coherent
// sources, g2(0), and the degradation of correlations with mean photon number.

#include <vector>

#include "cqkd/contextuality.hpp"

namespace cqkd {

struct SourceModel {
  enum class Kind { deterministic, coherent };

  Kind kind = Kind::deterministic;
  double mu = 1.0;                 // mean photon number per window (coherent)
  double two_photon_prob = 0.0;    // residual P(n=2) for the deterministic kind
  double dark_count_prob = 0.0;    // per-detector, per-window
  int n_max = 30;                  // photon-number truncation

  static SourceModel single_photon() { return {}; }
  static SourceModel quantum_dot(double two_photon_prob) {
    SourceModel m;
    m.two_photon_prob = two_photon_prob;
    return m;
  }
  static SourceModel coherent(double mu) {
    SourceModel m;
    m.kind = Kind::coherent;
    m.mu = mu;
    return m;
  }

  void validate() const;
};

// P(n), n = 0..n_max. Coherent: truncated renormalized Poisson(mu).
// Deterministic: P(1) = 1 - two_photon_prob, P(2) = two_photon_prob.
std::vector<double> photon_number_pmf(const SourceModel& model);

// <n(n-1)> / <n>^2 over the model's photon-number distribution.
double g2_of_model(const SourceModel& model);

// Closed-form inverse of g2 = 2 p2 / (1 + p2)^2 on [0, 1).
double two_photon_prob_for_g2(double g2);

// Exclusive-click degradation: outcome 0 requires every signal photon on the
// preferred detector and no other detector clicking; no-click rounds are
// discarded (fair sampling). With zero dark counts this is
//   p_eff(0) = sum_{n>=1} P(n) q0^n / sum_{n>=1} P(n).
double degraded_p0(double q0, const SourceModel& model);
CorrelationTable degrade_correlations(const CorrelationTable& ideal, const SourceModel& model);

// Probability that a round produces no click at all (those rounds are dropped).
double no_click_probability(const SourceModel& model);

struct SweepPoint {
  double mu, S1, S2, S;
};

// Degrade `baseline` at each mu and evaluate the witness. The grid must be
// strictly increasing and positive; the template's dark counts / truncation
// carry over and the kind is forced coherent.
std::vector<SweepPoint> sweep_mu(const CorrelationTable& baseline,
                                 const std::vector<double>& mu_grid,
                                 const SourceModel& model_template,
                                 const ExtendedGraph& g = ExtendedGraph::standard());

}  // namespace cqkd

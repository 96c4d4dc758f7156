#pragma once

// Randomness certification bounds for the x = 0 rounds: the analytic
// ideal-case bound, plus a constructive achievability search that lower
// bounds the adversarial guessing probability p* at a given (S1, S2).

#include <optional>
#include <string>

#include "cqkd/contextuality.hpp"

namespace cqkd {

struct RandomnessReport {
  double S1_target = 0, S2_target = 0;

  // -log2(1 - 1/sqrt(5)), available only in the ideal case S1 = 30,
  // S2 >= sqrt(5); anywhere else no randomness is certified.
  bool ideal_available = false;
  double ideal_R = 0;

  // Best (largest) max_{z,y} p(z|0,y) over explicit strategies reproducing
  // (S1, S2) within 1e-6 -- a lower bound on the true p*.
  bool achievable_found = false;
  double achievable_pstar = 0;
  double achievable_R = 0;  // -log2(pstar)
  std::optional<Strategy> achieving_strategy;

  std::string note;
};

// Throws ValidationError when S1 > 30 or S2 > 5 (outside the witness range).
// An infeasible pair inside the range is reported, not thrown.
RandomnessReport randomness_bounds(double S1, double S2,
                                   const ExtendedGraph& g = ExtendedGraph::standard());

}  // namespace cqkd

#pragma once

// Ideal qutrit strategy for the extended KCBS witness, witness evaluation
// from correlation tables, the brute-force classical bound, and ingestion
// of measured context tables.

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cqkd/graph.hpp"
#include "cqkd/linalg3.hpp"

namespace cqkd {

// Preparations x = 0..8 and the outcome-0 POVM elements M_{0|y}, y = 1..8.
// The outcome-1 element is always the complement I - M_{0|y}.
struct Strategy {
  std::array<Mat3c, 9> preparations;
  std::array<Mat3c, 8> measurements;

  const Mat3c& rho(int x) const { return preparations[x]; }
  const Mat3c& m0(int y) const { return measurements[y - 1]; }
  void validate(const Tolerances& tol = tolerances()) const;
};

// p(0|x,y) for x in 0..8, y in 1..8; p(1|x,y) = 1 - p(0|x,y). Entries may be
// absent (sparse measured tables). Raw counts are optional and carried for
// Monte Carlo error estimation.
class CorrelationTable {
 public:
  void set_p0(int x, int y, double p0);
  void set_counts(int x, int y, std::uint64_t n0, std::uint64_t n1);

  bool has(int x, int y) const { return present_[x][y - 1]; }
  double p0(int x, int y) const;
  double p1(int x, int y) const { return 1.0 - p0(x, y); }
  bool has_counts() const { return has_counts_; }
  std::uint64_t n0(int x, int y) const { return n0_[x][y - 1]; }
  std::uint64_t n1(int x, int y) const { return n1_[x][y - 1]; }

  // All (x,y) pairs the witness needs but the table lacks.
  std::vector<std::pair<int, int>> missing_pairs(const ExtendedGraph& g) const;

 private:
  std::array<std::array<double, 8>, 9> p0_{};
  std::array<std::array<std::uint64_t, 8>, 9> n0_{}, n1_{};
  std::array<std::array<bool, 8>, 9> present_{};
  bool has_counts_ = false;
};

struct WitnessTerm {
  enum class Kind { diagonal, edge, kcbs };
  Kind kind;
  int x, y;
  double value;  // the probability the term contributes (p0 or p1 as appropriate)
};

struct WitnessReport {
  double S1 = 0, S2 = 0, S = 0;
  double S_normalized = 0;  // S / 35
  double classical_bound = 32.0;
  double quantum_reference = 0;  // 30 + sqrt(5), the ideal-strategy value
  bool violation = false;        // S > 32
  std::vector<WitnessTerm> terms;
  // Standard errors from Monte Carlo resampling, when counts are available.
  std::optional<double> sigma_S1, sigma_S2, sigma_S;
};

// The five KCBS rays v_k = (cos t, sin t cos(4 pi k/5), sin t sin(4 pi k/5)),
// cos^2 t = cos(pi/5)/(1+cos(pi/5)); cyclically adjacent rays are orthogonal
// and |<e0|v_k>|^2 = 1/sqrt(5).
std::array<Vec3c, 5> kcbs_vectors();

// rho_0 = |e0><e0|, rho_x the KCBS projectors for x = 1..5, rho_6/7/8 the
// cross-product completions of their contexts, and M_{0|y} = rho_y.
// Evaluates to S1 = 30, S2 = sqrt(5).
Strategy ideal_strategy();

// p(0|x,y) = tr(rho_x M_{0|y}) for every pair.
CorrelationTable born_correlations(const Strategy& s, const Tolerances& tol = tolerances());

WitnessReport evaluate_witness(const CorrelationTable& table,
                               const ExtendedGraph& g = ExtendedGraph::standard());

// One deterministic classical strategy: each measurement y answers 0 for a
// subset of the three messages (a 3-bit mask), each preparation sends the
// message that maximizes its witness contribution.
struct ClassicalValue {
  int s1 = 0, s2 = 0;
  int total() const { return s1 + s2; }
};
ClassicalValue classical_value_for_assignment(const std::array<int, 8>& outcome0_masks,
                                              const ExtendedGraph& g = ExtendedGraph::standard());

// Exhaustive maximum over all 8^8 measurement assignments. `workers` <= 0
// reads CQKD_WORKERS (default 1).
int classical_bound_bruteforce(const ExtendedGraph& g = ExtendedGraph::standard(),
                               int workers = 0);

// --- measured-table ingestion -----------------------------------------------
//
// CSV schema: context,prepare_x,detector_y,probability ('#' starts a comment,
// a literal header row is allowed). Each context lists, per prepared x, the
// click probability at each of its three detectors. Detector labels above 8
// are auxiliary completion rays and are excluded from the witness. Duplicate
// diagonal entries are averaged; p(0|0,y) for y in 1..5 is taken from the
// context containing the 5-cycle edge (pred(y), y).
CorrelationTable ingest_tables(std::istream& in,
                               const ExtendedGraph& g = ExtendedGraph::standard());
CorrelationTable ingest_tables_file(const std::string& path,
                                    const ExtendedGraph& g = ExtendedGraph::standard());

}  // namespace cqkd

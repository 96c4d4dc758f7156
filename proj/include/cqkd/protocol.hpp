#pragma once

// Monte Carlo simulation of the prepare-and-measure protocol: uniform inputs,
// Born sampling through a source model, verification/key sifting, and Monte
// Carlo witness error bars.

#include <cstdint>
#include <optional>
#include <vector>

#include "cqkd/contextuality.hpp"
#include "cqkd/source_model.hpp"

namespace cqkd {

enum class Phase : std::uint8_t { verification, key, discarded };

struct RoundRecord {
  std::uint8_t x;  // 0..8
  std::uint8_t y;  // 1..8
  std::uint8_t z;  // 0/1; meaningless when discarded (no click happened)
  Phase phase;
};

struct ProtocolConfig {
  std::uint64_t rounds = 0;
  std::uint64_t seed = 0;
  Strategy strategy;
  SourceModel source;
  double verification_fraction = 0.5;

  void validate() const;
};

struct SiftedResult {
  std::optional<WitnessReport> witness_estimate;  // absent if the verification
  std::vector<std::pair<int, int>> missing_pairs; // pool misses required pairs
  std::vector<std::uint8_t> alice_key, bob_key;
  double empirical_Pk = 0;      // key rounds / total rounds (discards included)
  double agreement_rate = 0;
  bool degenerate = false;      // empty key pool
  CorrelationTable verification_counts;
};

// x uniform on 0..8, y uniform on 1..8, z from the source-degraded Born
// probability; no-click rounds come out marked discarded. Clicked rounds are
// provisionally marked verification; sift() moves a subset to the key pool.
std::vector<RoundRecord> run_rounds(const ProtocolConfig& config);

// x=0 rounds and non-key-eligible rounds always verify; key-eligible rounds
// are split by verification_fraction. Alice's key bit is f(x,y) = [y != x],
// Bob's is z.
SiftedResult sift(std::vector<RoundRecord>& records, const ExtendedGraph& g,
                  double verification_fraction, std::uint64_t seed);

enum class ResampleKind { poisson, multinomial };

// Resamples the table's counts (Poisson at the observed value by default),
// re-evaluates the witness per resample, and fills the sigma fields.
WitnessReport estimate_witness_errors(const CorrelationTable& counts, int resamples,
                                      std::uint64_t seed,
                                      ResampleKind kind = ResampleKind::poisson,
                                      const ExtendedGraph& g = ExtendedGraph::standard());

}  // namespace cqkd

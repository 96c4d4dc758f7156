#include "cqkd/protocol.hpp"

#include <cmath>

#include "cqkd/rng.hpp"

namespace cqkd {

void ProtocolConfig::validate() const {
  if (rounds < 1) throw ValidationError("protocol: rounds must be >= 1");
  if (!(verification_fraction > 0.0 && verification_fraction < 1.0))
    throw ValidationError("protocol: verification_fraction must lie in (0,1)");
  strategy.validate();
  source.validate();
}

std::vector<RoundRecord> run_rounds(const ProtocolConfig& config) {
  config.validate();
  const CorrelationTable eff =
      degrade_correlations(born_correlations(config.strategy), config.source);
  const double p_noclick = no_click_probability(config.source);

  // Precomputed p_eff(0|x,y) lookup for the hot loop.
  double p0[9][8];
  for (int x = 0; x <= 8; ++x)
    for (int y = 1; y <= 8; ++y) p0[x][y - 1] = eff.p0(x, y);

  Rng inputs = Rng::child(config.seed, "inputs");
  Rng born = Rng::child(config.seed, "born");

  std::vector<RoundRecord> records;
  records.reserve(config.rounds);
  for (std::uint64_t i = 0; i < config.rounds; ++i) {
    RoundRecord r;
    r.x = static_cast<std::uint8_t>(inputs.uniform_below(9));
    r.y = static_cast<std::uint8_t>(1 + inputs.uniform_below(8));
    // Two draws per round regardless of outcome keeps the stream stable.
    const double u_click = born.uniform01();
    const double u_outcome = born.uniform01();
    if (u_click < p_noclick) {
      r.z = 1;
      r.phase = Phase::discarded;
    } else {
      r.z = u_outcome < p0[r.x][r.y - 1] ? 0 : 1;
      r.phase = Phase::verification;
    }
    records.push_back(r);
  }
  return records;
}

SiftedResult sift(std::vector<RoundRecord>& records, const ExtendedGraph& g,
                  double verification_fraction, std::uint64_t seed) {
  if (!(verification_fraction > 0.0 && verification_fraction < 1.0))
    throw ValidationError("sift: verification_fraction must lie in (0,1)");
  Rng pick = Rng::child(seed, "sift");
  SiftedResult out;

  // Counts per (x,y,z) over the verification pool.
  std::uint64_t c0[9][8] = {}, c1[9][8] = {};
  std::uint64_t agree = 0;

  for (auto& r : records) {
    if (r.phase == Phase::discarded) continue;
    const bool eligible = g.key_eligible(r.x, r.y);
    const bool to_key = eligible && pick.uniform01() >= verification_fraction;
    if (to_key) {
      r.phase = Phase::key;
      const std::uint8_t f = r.y == r.x ? 0 : 1;
      out.alice_key.push_back(f);
      out.bob_key.push_back(r.z);
      if (f == r.z) ++agree;
    } else {
      r.phase = Phase::verification;
      if (r.z == 0)
        ++c0[r.x][r.y - 1];
      else
        ++c1[r.x][r.y - 1];
    }
  }

  for (int x = 0; x <= 8; ++x)
    for (int y = 1; y <= 8; ++y)
      if (c0[x][y - 1] + c1[x][y - 1] > 0)
        out.verification_counts.set_counts(x, y, c0[x][y - 1], c1[x][y - 1]);

  out.empirical_Pk = records.empty()
                         ? 0.0
                         : static_cast<double>(out.alice_key.size()) /
                               static_cast<double>(records.size());
  out.degenerate = out.alice_key.empty();
  out.agreement_rate =
      out.degenerate ? 0.0
                     : static_cast<double>(agree) / static_cast<double>(out.alice_key.size());

  out.missing_pairs = out.verification_counts.missing_pairs(g);
  if (out.missing_pairs.empty()) {
    out.witness_estimate = evaluate_witness(out.verification_counts, g);
  }
  return out;
}

WitnessReport estimate_witness_errors(const CorrelationTable& counts, int resamples,
                                      std::uint64_t seed, ResampleKind kind,
                                      const ExtendedGraph& g) {
  WitnessReport point = evaluate_witness(counts, g);
  if (resamples <= 1 || !counts.has_counts()) {
    point.sigma_S1 = point.sigma_S2 = point.sigma_S = 0.0;
    return point;
  }
  Rng rng = Rng::child(seed, "resample");
  double sum1 = 0, sum2 = 0, sq1 = 0, sq2 = 0, sumS = 0, sqS = 0;
  for (int r = 0; r < resamples; ++r) {
    CorrelationTable draw;
    for (int x = 0; x <= 8; ++x) {
      for (int y = 1; y <= 8; ++y) {
        if (!counts.has(x, y)) continue;
        const std::uint64_t a = counts.n0(x, y), b = counts.n1(x, y);
        std::uint64_t a2, b2;
        if (kind == ResampleKind::poisson) {
          a2 = rng.poisson(static_cast<double>(a));
          b2 = rng.poisson(static_cast<double>(b));
        } else {
          const std::uint64_t n = a + b;
          a2 = rng.binomial(n, static_cast<double>(a) / static_cast<double>(n));
          b2 = n - a2;
        }
        if (a2 + b2 == 0) {
          draw.set_p0(x, y, counts.p0(x, y));  // resampled cell vanished entirely
        } else {
          draw.set_p0(x, y, static_cast<double>(a2) / static_cast<double>(a2 + b2));
        }
      }
    }
    const WitnessReport w = evaluate_witness(draw, g);
    sum1 += w.S1;
    sq1 += w.S1 * w.S1;
    sum2 += w.S2;
    sq2 += w.S2 * w.S2;
    sumS += w.S;
    sqS += w.S * w.S;
  }
  const double n = resamples;
  auto sdev = [n](double sum, double sq) {
    const double var = (sq - sum * sum / n) / (n - 1.0);
    return var > 0 ? std::sqrt(var) : 0.0;
  };
  point.sigma_S1 = sdev(sum1, sq1);
  point.sigma_S2 = sdev(sum2, sq2);
  point.sigma_S = sdev(sumS, sqS);
  return point;
}

}  // namespace cqkd

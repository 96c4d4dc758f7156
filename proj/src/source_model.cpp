#include "cqkd/source_model.hpp"

#include <cmath>

namespace cqkd {

void SourceModel::validate() const {
  if (mu < 0) throw ValidationError("source: mu must be >= 0");
  if (n_max < 2) throw ValidationError("source: n_max must be >= 2");
  if (two_photon_prob < 0 || two_photon_prob > 1)
    throw ValidationError("source: two_photon_prob outside [0,1]");
  if (dark_count_prob < 0 || dark_count_prob > 1)
    throw ValidationError("source: dark_count_prob outside [0,1]");
}

std::vector<double> photon_number_pmf(const SourceModel& model) {
  model.validate();
  std::vector<double> pmf(model.n_max + 1, 0.0);
  if (model.kind == SourceModel::Kind::deterministic) {
    pmf[1] = 1.0 - model.two_photon_prob;
    pmf[2] = model.two_photon_prob;
    return pmf;
  }
  if (model.mu == 0.0) {
    pmf[0] = 1.0;
    return pmf;
  }
  double term = std::exp(-model.mu);  // P(0)
  double norm = 0.0;
  for (int n = 0; n <= model.n_max; ++n) {
    pmf[n] = term;
    norm += term;
    term *= model.mu / (n + 1);
  }
  for (double& p : pmf) p /= norm;
  return pmf;
}

double g2_of_model(const SourceModel& model) {
  const auto pmf = photon_number_pmf(model);
  double mean = 0.0, pair_rate = 0.0;
  for (size_t n = 0; n < pmf.size(); ++n) {
    const double dn = static_cast<double>(n);
    mean += dn * pmf[n];
    pair_rate += dn * (dn - 1.0) * pmf[n];
  }
  if (mean <= 0.0) throw ValidationError("g2: mean photon number is zero");
  return pair_rate / (mean * mean);
}

double two_photon_prob_for_g2(double g2) {
  if (g2 < 0 || g2 >= 1) throw ValidationError("two_photon_prob_for_g2: need g2 in [0,1)");
  if (g2 == 0) return 0.0;
  // 2p = g(1+p)^2  ->  g p^2 + (2g-2) p + g = 0, smaller root.
  return ((1.0 - g2) - std::sqrt(1.0 - 2.0 * g2)) / g2;
}

double degraded_p0(double q0, const SourceModel& model) {
  const auto pmf = photon_number_pmf(model);
  const double d = model.dark_count_prob;
  double signal = 0.0;  // sum_{n>=1} P(n) q0^n
  double qn = 1.0;
  for (size_t n = 1; n < pmf.size(); ++n) {
    qn *= q0;
    signal += pmf[n] * qn;
  }
  const double no_dark2 = (1.0 - d) * (1.0 - d);
  const double numer = no_dark2 * (signal + pmf[0] * d);
  const double denom = 1.0 - pmf[0] * no_dark2 * (1.0 - d);
  if (denom <= 0.0) throw ValidationError("degrade: every round is a no-click round");
  return numer / denom;
}

double no_click_probability(const SourceModel& model) {
  const auto pmf = photon_number_pmf(model);
  const double d = model.dark_count_prob;
  return pmf[0] * (1.0 - d) * (1.0 - d) * (1.0 - d);
}

CorrelationTable degrade_correlations(const CorrelationTable& ideal, const SourceModel& model) {
  model.validate();
  CorrelationTable out;
  for (int x = 0; x <= 8; ++x) {
    for (int y = 1; y <= 8; ++y) {
      if (!ideal.has(x, y)) continue;
      out.set_p0(x, y, degraded_p0(ideal.p0(x, y), model));
    }
  }
  return out;
}

std::vector<SweepPoint> sweep_mu(const CorrelationTable& baseline,
                                 const std::vector<double>& mu_grid,
                                 const SourceModel& model_template,
                                 const ExtendedGraph& g) {
  if (mu_grid.empty()) throw ValidationError("sweep: empty mu grid");
  for (size_t i = 0; i < mu_grid.size(); ++i) {
    if (mu_grid[i] <= 0) throw ValidationError("sweep: mu values must be positive");
    if (i > 0 && mu_grid[i] <= mu_grid[i - 1])
      throw ValidationError("sweep: mu grid must be strictly increasing");
  }
  std::vector<SweepPoint> points;
  points.reserve(mu_grid.size());
  for (double mu : mu_grid) {
    SourceModel m = model_template;
    m.kind = SourceModel::Kind::coherent;
    m.mu = mu;
    const auto report = evaluate_witness(degrade_correlations(baseline, m), g);
    points.push_back({mu, report.S1, report.S2, report.S});
  }
  return points;
}

}  // namespace cqkd

#include "cqkd/security.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>

#include "cqkd/rng.hpp"

namespace cqkd {

void JointDistribution2x2::validate(double tol) const {
  double sum = 0;
  for (const auto& row : p)
    for (double v : row) {
      if (v < -tol) throw ValidationError("joint: negative entry");
      sum += v;
    }
  if (std::abs(sum - 1.0) > tol) throw ValidationError("joint: entries do not sum to 1");
}

double mutual_information(const JointDistribution2x2& j) {
  j.validate();
  double bits = 0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const double pab = j.p[a][b];
      if (pab <= 0) continue;
      bits += pab * std::log2(pab / (j.marginal_a(a) * j.marginal_b(b)));
    }
  }
  return bits;
}

Mat3c eve_channel(const Mat3c& rho, double q, const Tolerances& tol) {
  if (q < 0 || q > 1) throw ValidationError("eve_channel: q outside [0,1]");
  if (!is_density_operator(rho, tol))
    throw ValidationError("eve_channel: input is not a density operator");
  return q * dephase(rho) + (1.0 - q) * rho;
}

Mat9c attack_unitary() {
  // U |j>|k> = |j>|k+j mod 3>: copies basis information onto the ancilla
  // (which starts in |0>) while staying unitary on the full space.
  Mat9c u = Mat9c::Zero();
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) u(3 * j + (k + j) % 3, 3 * j + k) = 1.0;
  return u;
}

Mat3c eve_channel_via_unitary(const Mat3c& rho, double q, const Tolerances& tol) {
  if (q < 0 || q > 1) throw ValidationError("eve_channel: q outside [0,1]");
  if (!is_density_operator(rho, tol))
    throw ValidationError("eve_channel: input is not a density operator");
  static const Mat9c u = attack_unitary();
  const Mat3c ancilla = projector(Vec3c(1, 0, 0));
  const Mat9c evolved = u * kron(rho, ancilla) * u.adjoint();
  return q * partial_trace_second(evolved) + (1.0 - q) * rho;
}

Mat3c AttackModel::eve_m0(int y) const {
  Vec3c e = Vec3c::Zero();
  e(coloring[y - 1]) = 1.0;
  return projector(e);
}

void AttackModel::validate(const ExtendedGraph& g) const {
  if (q < 0 || q > 1) throw ValidationError("attack: q outside [0,1]");
  if (!g.is_proper_coloring(coloring))
    throw ValidationError("attack: coloring is not proper");
  // Perfect guessing on key pairs: e = 0 iff color(x) == color(y) iff y == x.
  for (int x = 1; x <= 8; ++x) {
    for (int y = 1; y <= 8; ++y) {
      if (!g.key_eligible(x, y)) continue;
      const int e = coloring[x - 1] == coloring[y - 1] ? 0 : 1;
      const int f = y == x ? 0 : 1;
      if (e != f) throw ValidationError("attack: coloring does not guess f perfectly");
    }
  }
}

std::vector<Coloring> enumerate_colorings(const ExtendedGraph& g) {
  std::vector<Coloring> out;
  Coloring c{};
  auto backtrack = [&](auto&& self, int v) -> void {
    if (v == 8) {
      out.push_back(c);
      return;
    }
    for (int color = 0; color < 3; ++color) {
      bool ok = true;
      for (int u : g.neighbors(v + 1)) {
        if (u - 1 < v && c[u - 1] == color) {
          ok = false;
          break;
        }
      }
      if (ok) {
        c[v] = color;
        self(self, v + 1);
      }
    }
  };
  backtrack(backtrack, 0);
  return out;
}

namespace {

double witness_value(const Strategy& s, double q, const ExtendedGraph& g) {
  const Mat3c rho0_eff = q * dephase(s.rho(0)) + (1.0 - q) * s.rho(0);
  double S = 0;
  for (int x = 1; x <= 8; ++x) {
    S += trace_real(s.rho(x) * s.m0(x));
    for (int y : g.neighbors(x)) S += 1.0 - trace_real(s.rho(x) * s.m0(y));
  }
  for (int y = 1; y <= 5; ++y) S += trace_real(rho0_eff * s.m0(y));
  return S;
}

SeesawResult seesaw_single(double q, const Coloring& coloring, const ExtendedGraph& g,
                           const SeesawOptions& opts, const Vec3c& rho0_seed) {
  Strategy s;
  std::array<Mat3c, 3> basis;
  for (int k = 0; k < 3; ++k) {
    Vec3c e = Vec3c::Zero();
    e(k) = 1.0;
    basis[k] = projector(e);
  }
  s.preparations[0] = projector(rho0_seed.normalized());
  for (int x = 1; x <= 8; ++x) s.preparations[x] = basis[coloring[x - 1]];
  for (int y = 1; y <= 8; ++y) s.measurements[y - 1] = basis[coloring[y - 1]];

  // B_y = sum of the neighbours' (dephasing-invariant) states.
  std::array<Mat3c, 8> nbr_sum;
  for (int y = 1; y <= 8; ++y) {
    Mat3c b = Mat3c::Zero();
    for (int x : g.neighbors(y)) b += s.rho(x);
    nbr_sum[y - 1] = b;
  }

  SeesawResult res;
  res.coloring = coloring;
  double S_prev = witness_value(s, q, g);
  for (int it = 0; it < opts.max_iters; ++it) {
    const Mat3c rho0_eff = q * dephase(s.rho(0)) + (1.0 - q) * s.rho(0);
    // Measurement step: M_{0|y} <- projector onto the positive eigenspace of
    // the coefficient operator of M_{0|y} in S.
    for (int y = 1; y <= 8; ++y) {
      Mat3c a = s.rho(y) - nbr_sum[y - 1];
      if (y <= 5) a += rho0_eff;
      s.measurements[y - 1] = positive_eigenspace_projector(a);
    }
    // State step: rho_0 <- top eigenvector of the channel-adjoint S2 operator.
    Mat3c grad = Mat3c::Zero();
    for (int y = 1; y <= 5; ++y) grad += q * dephase(s.m0(y)) + (1.0 - q) * s.m0(y);
    s.preparations[0] = projector(eig_hermitian(grad).vectors[0]);

    const double S = witness_value(s, q, g);
    if (S < S_prev - 1e-9)
      throw std::logic_error("seesaw: objective decreased, update rule broken");
    res.iterations = it + 1;
    if (S - S_prev < opts.tol) {
      res.converged = true;
      S_prev = S;
      break;
    }
    S_prev = S;
  }
  res.S_max = S_prev;
  res.strategy = s;
  return res;
}

std::vector<Vec3c> restart_seeds(int restarts, std::uint64_t seed) {
  std::vector<Vec3c> seeds;
  const double r = 1.0 / std::sqrt(2.0);
  // Deterministic starts covering the basis and in-plane superpositions, then
  // random directions.
  seeds.push_back(Vec3c(1, 0, 0));
  seeds.push_back(Vec3c(0, 1, 0));
  seeds.push_back(Vec3c(0, 0, 1));
  seeds.push_back(Vec3c(r, r, 0));
  seeds.push_back(Vec3c(r, -r, 0));
  seeds.push_back(Vec3c(r, 0, r));
  seeds.push_back(Vec3c(r, 0, -r));
  seeds.push_back(Vec3c(0, r, r));
  seeds.push_back(Vec3c(0, r, -r));
  Rng rng = Rng::child(seed, "seesaw-restarts");
  while (static_cast<int>(seeds.size()) < restarts) {
    Vec3c v;
    for (int i = 0; i < 3; ++i) {
      // Box-Muller keeps the direction distribution rotation-invariant.
      const double u1 = std::max(rng.uniform01(), 1e-300);
      const double u2 = rng.uniform01();
      const double mag = std::sqrt(-2.0 * std::log(u1));
      v(i) = Complex(mag * std::cos(2 * M_PI * u2), mag * std::sin(2 * M_PI * u2));
    }
    seeds.push_back(v.normalized());
  }
  seeds.resize(restarts);
  return seeds;
}

}  // namespace

SeesawResult seesaw_max_S(double q, const Coloring& coloring, const ExtendedGraph& g,
                          const SeesawOptions& opts) {
  if (q < 0 || q > 1) throw ValidationError("seesaw: q outside [0,1]");
  if (!g.is_proper_coloring(coloring))
    throw ValidationError("seesaw: coloring is not proper");
  SeesawResult best;
  best.S_max = -1;
  for (const Vec3c& seed : restart_seeds(std::max(1, opts.restarts), opts.seed)) {
    SeesawResult r = seesaw_single(q, coloring, g, opts, seed);
    if (r.S_max > best.S_max) best = r;
  }
  return best;
}

SeesawResult seesaw_max_S(double q, const ExtendedGraph& g, const SeesawOptions& opts) {
  SeesawResult best;
  best.S_max = -1;
  for (const Coloring& c : enumerate_colorings(g)) {
    SeesawResult r = seesaw_max_S(q, c, g, opts);
    if (r.S_max > best.S_max) best = r;
  }
  return best;
}

KeyRateReport evaluate_attack(double q, const Strategy& strategy, const AttackModel& attack,
                              const ExtendedGraph& g) {
  attack.validate(g);
  strategy.validate();
  if (q < 0 || q > 1) throw ValidationError("evaluate_attack: q outside [0,1]");

  KeyRateReport rep;
  // Bob's outcomes on key rounds, uniform over the 30 key pairs.
  JointDistribution2x2 j_zf;
  int pairs = 0;
  for (int x = 1; x <= 8; ++x) {
    for (int y = 1; y <= 8; ++y) {
      if (!g.key_eligible(x, y)) continue;
      ++pairs;
      const int f = y == x ? 0 : 1;
      const double pz0 = trace_real(eve_channel(strategy.rho(x), q) * strategy.m0(y));
      j_zf.p[0][f] += pz0;
      j_zf.p[1][f] += 1.0 - pz0;
    }
  }
  for (auto& row : j_zf.p)
    for (double& v : row) v /= pairs;

  // Eve knows f under the attack branch, guesses e = 1 otherwise.
  const double pf0 = 8.0 / 30.0, pf1 = 22.0 / 30.0;
  JointDistribution2x2 j_ef;
  j_ef.p[0][0] = q * pf0;
  j_ef.p[1][0] = (1.0 - q) * pf0;
  j_ef.p[0][1] = 0.0;
  j_ef.p[1][1] = pf1;

  rep.I_AB = mutual_information(j_zf);
  rep.I_AE = mutual_information(j_ef);
  rep.r = rep.I_AB - rep.I_AE;
  rep.overall = kKeyFraction * rep.r;

  // The witness value an honest verification phase would observe.
  Strategy effective = strategy;
  for (int x = 0; x <= 8; ++x) effective.preparations[x] = eve_channel(strategy.rho(x), q);
  rep.S_achieved = evaluate_witness(born_correlations(effective), g).S;
  return rep;
}

std::vector<KeyRatePoint> key_rate_vs_S(const std::vector<double>& q_grid,
                                        const std::optional<Coloring>& coloring,
                                        const SeesawOptions& opts, const ExtendedGraph& g,
                                        int workers) {
  for (double q : q_grid)
    if (q < 0 || q > 1) throw ValidationError("key_rate_vs_S: q outside [0,1]");
  if (workers <= 0) {
    const char* env = std::getenv("CQKD_WORKERS");
    workers = env ? std::max(1, std::atoi(env)) : 1;
  }
  auto eval_point = [&](double q) {
    const SeesawResult sr = coloring ? seesaw_max_S(q, *coloring, g, opts)
                                     : seesaw_max_S(q, g, opts);
    const KeyRateReport kr = evaluate_attack(q, sr.strategy, {q, sr.coloring}, g);
    return KeyRatePoint{q, sr.S_max, kr.I_AB, kr.I_AE, kr.r, kr.overall};
  };
  std::vector<KeyRatePoint> curve(q_grid.size());
  if (workers == 1) {
    for (size_t i = 0; i < q_grid.size(); ++i) curve[i] = eval_point(q_grid[i]);
    return curve;
  }
  // Grid points are independent; output stays ordered by grid index.
  std::vector<std::future<KeyRatePoint>> futs;
  futs.reserve(q_grid.size());
  for (double q : q_grid) futs.push_back(std::async(std::launch::async, eval_point, q));
  for (size_t i = 0; i < futs.size(); ++i) curve[i] = futs[i].get();
  return curve;
}

Strategy sm_attack_strategy(bool maximize_sign) {
  Strategy s;
  std::array<Mat3c, 3> basis;
  for (int k = 0; k < 3; ++k) {
    Vec3c e = Vec3c::Zero();
    e(k) = 1.0;
    basis[k] = projector(e);
  }
  const Coloring c = ExtendedGraph::reference_coloring();
  for (int x = 1; x <= 8; ++x) s.preparations[x] = basis[c[x - 1]];

  // rho_0 = |psi><psi| with psi = (|0> + s|1>)/sqrt(2); the maximizing sign
  // pairs the superposition with the negative measurement off-diagonals.
  const double sign = maximize_sign ? -1.0 : 1.0;
  const Vec3c psi(1.0 / std::sqrt(2.0), sign / std::sqrt(2.0), 0.0);
  s.preparations[0] = projector(psi);

  // Rank-1 measurements with |<0|m>|^2 = 0.9932; the printed 4-digit matrices
  // are this projector rounded.
  const double a = std::sqrt(0.9932), b = std::sqrt(0.0068);
  const Vec3c m13(a, -b, 0.0), m24(-b, a, 0.0);
  s.measurements[0] = s.measurements[2] = projector(m13);
  s.measurements[1] = s.measurements[3] = projector(m24);
  s.measurements[4] = s.measurements[5] = basis[2];
  s.measurements[6] = basis[0];
  s.measurements[7] = basis[1];
  return s;
}

}  // namespace cqkd

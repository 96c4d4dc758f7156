// Command-line front end: witness evaluation from data files, protocol
// simulation, mu sweeps, attack analysis, randomness reports, and plot-data
// export. All outputs are CSV/JSON with an embedded run manifest; identical
// manifests produce byte-identical files.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cqkd/contextuality.hpp"
#include "cqkd/manifest.hpp"
#include "cqkd/protocol.hpp"
#include "cqkd/randomness.hpp"
#include "cqkd/security.hpp"
#include "cqkd/source_model.hpp"

namespace {

using namespace cqkd;

std::string join_path(const std::string& dir, const std::string& name) {
  if (dir.empty() || dir == ".") return name;
  return dir.back() == '/' ? dir + name : dir + "/" + name;
}

Json witness_json(const WitnessReport& w) {
  Json j;
  j["S1"] = w.S1;
  j["S2"] = w.S2;
  j["S"] = w.S;
  j["S_normalized"] = w.S_normalized;
  j["classical_bound"] = w.classical_bound;
  j["quantum_reference"] = w.quantum_reference;
  j["violation"] = w.violation;
  if (w.sigma_S) {
    j["sigma_S1"] = *w.sigma_S1;
    j["sigma_S2"] = *w.sigma_S2;
    j["sigma_S"] = *w.sigma_S;
  }
  Json terms = Json::array();
  for (const auto& t : w.terms) {
    const char* kind = t.kind == WitnessTerm::Kind::diagonal ? "diagonal"
                       : t.kind == WitnessTerm::Kind::edge   ? "edge"
                                                             : "kcbs";
    terms.push_back(Json{{"kind", kind}, {"x", t.x}, {"y", t.y}, {"value", t.value}});
  }
  j["terms"] = terms;
  return j;
}

Json matrix_json(const Mat3c& m) {
  Json re = Json::array(), im = Json::array();
  for (int i = 0; i < 3; ++i) {
    Json rrow = Json::array(), irow = Json::array();
    for (int k = 0; k < 3; ++k) {
      rrow.push_back(m(i, k).real());
      irow.push_back(m(i, k).imag());
    }
    re.push_back(rrow);
    im.push_back(irow);
  }
  return Json{{"re", re}, {"im", im}};
}

Json strategy_json(const Strategy& s) {
  Json preps = Json::array(), meas = Json::array();
  for (int x = 0; x <= 8; ++x) preps.push_back(matrix_json(s.rho(x)));
  for (int y = 1; y <= 8; ++y) meas.push_back(matrix_json(s.m0(y)));
  return Json{{"preparations", preps}, {"measurements", meas}};
}

void print_witness_summary(const WitnessReport& w) {
  std::printf("S1            = %.6f\n", w.S1);
  std::printf("S2            = %.6f\n", w.S2);
  std::printf("S  = S1 + S2  = %.6f", w.S);
  if (w.sigma_S && *w.sigma_S > 0) std::printf("  (+/- %.4f)", *w.sigma_S);
  std::printf("\nS / 35        = %.6f\n", w.S_normalized);
  std::printf("classical bound 32, ideal-strategy value %.6f\n", w.quantum_reference);
  std::printf("verdict: %s\n", w.violation ? "VIOLATION (S > 32)" : "NO VIOLATION (S <= 32)");
}

std::string hex_pack(const std::vector<std::uint8_t>& bits) {
  std::string hex;
  for (size_t i = 0; i < bits.size(); i += 8) {
    unsigned byte = 0;
    for (size_t b = 0; b < 8 && i + b < bits.size(); ++b)
      byte |= static_cast<unsigned>(bits[i + b] & 1) << (7 - b);
    char buf[3];
    std::snprintf(buf, sizeof buf, "%02x", byte);
    hex += buf;
  }
  return hex;
}

SourceModel source_from_flags(const std::string& kind, double mu, double g2,
                              double two_photon, double dark, int nmax) {
  SourceModel m;
  if (kind == "qd") {
    m.kind = SourceModel::Kind::deterministic;
    m.two_photon_prob = g2 > 0 ? two_photon_prob_for_g2(g2) : two_photon;
  } else if (kind == "coherent") {
    m.kind = SourceModel::Kind::coherent;
    m.mu = mu;
  } else {
    throw ValidationError("unknown source kind '" + kind + "' (use qd or coherent)");
  }
  m.dark_count_prob = dark;
  m.n_max = nmax;
  m.validate();
  return m;
}

int run(int argc, char** argv) {
  CLI::App app{"Contextuality-based semi-device-independent QKD toolkit"};
  app.require_subcommand(1);

  std::string out_dir = ".";
  std::string timestamp;
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_option("--timestamp", timestamp,
                 "Recorded verbatim in manifests (omitted by default so reruns are byte-identical)");

  // --- witness ---------------------------------------------------------
  auto* cmd_witness = app.add_subcommand("witness", "Evaluate the witness from a correlation CSV");
  std::string witness_input;
  cmd_witness->add_option("--input", witness_input, "Correlation CSV")->required();

  // --- simulate --------------------------------------------------------
  auto* cmd_sim = app.add_subcommand("simulate", "Monte Carlo protocol run");
  std::uint64_t rounds = 0, seed = 1;
  std::string source_kind = "qd", strategy_kind = "ideal";
  double mu = 0.1, g2 = 0, two_photon = 0, dark = 0, vfrac = 0.5, q_sim = kSmAttackQ;
  int nmax = 30, resamples = 200;
  cmd_sim->add_option("--rounds", rounds, "Number of protocol rounds")
      ->required()
      ->check(CLI::PositiveNumber);
  cmd_sim->add_option("--seed", seed, "Root seed")->capture_default_str();
  cmd_sim->add_option("--source", source_kind, "qd | coherent")->capture_default_str();
  cmd_sim->add_option("--mu", mu, "Mean photon number (coherent)")->capture_default_str();
  cmd_sim->add_option("--g2", g2, "Target g2(0); sets the qd two-photon probability");
  cmd_sim->add_option("--two-photon-prob", two_photon, "Residual P(n=2) for the qd source");
  cmd_sim->add_option("--dark", dark, "Per-detector dark-click probability")->capture_default_str();
  cmd_sim->add_option("--nmax", nmax, "Photon-number truncation")->capture_default_str();
  cmd_sim->add_option("--verification-fraction", vfrac, "Share of key-eligible rounds verified")
      ->capture_default_str();
  cmd_sim->add_option("--strategy", strategy_kind, "ideal | sm-attack")->capture_default_str();
  cmd_sim->add_option("--q", q_sim, "Attack probability for --strategy sm-attack")
      ->capture_default_str();
  cmd_sim->add_option("--resamples", resamples, "Monte Carlo resamples for error bars")
      ->capture_default_str();

  // --- sweep-mu --------------------------------------------------------
  auto* cmd_sweep = app.add_subcommand("sweep-mu", "S2 degradation across mean photon numbers");
  double mu_min = 0.01, mu_max = 1.0;
  int mu_points = 100;
  std::vector<double> mu_list;
  std::string sweep_input;
  double sweep_dark = 0;
  int sweep_nmax = 30;
  std::optional<double> threshold;
  cmd_sweep->add_option("--mu-min", mu_min, "Grid start")->capture_default_str();
  cmd_sweep->add_option("--mu-max", mu_max, "Grid end")->capture_default_str();
  cmd_sweep->add_option("--points", mu_points, "Grid size")->capture_default_str();
  cmd_sweep->add_option("--mu", mu_list, "Explicit mu values (overrides the grid)");
  cmd_sweep->add_option("--input", sweep_input,
                        "Baseline correlation CSV (default: ideal strategy)");
  cmd_sweep->add_option("--dark", sweep_dark, "Per-detector dark-click probability")
      ->capture_default_str();
  cmd_sweep->add_option("--nmax", sweep_nmax, "Photon-number truncation")->capture_default_str();
  double threshold_val = 0;
  auto* thr_opt = cmd_sweep->add_option("--threshold", threshold_val,
                                        "Report where S2 crosses this value");

  // --- attack ----------------------------------------------------------
  auto* cmd_attack = app.add_subcommand("attack", "SeeSaw witness maximization at one q");
  double q_attack = kSmAttackQ;
  std::string coloring_kind = "sm";
  int restarts = 20, iters = 500;
  double tol = 1e-10;
  std::uint64_t attack_seed = 1;
  cmd_attack->add_option("--q", q_attack, "Attack probability")->capture_default_str();
  cmd_attack->add_option("--coloring", coloring_kind, "sm | best (search all proper colorings)")
      ->capture_default_str();
  cmd_attack->add_option("--restarts", restarts, "SeeSaw restarts")->capture_default_str();
  cmd_attack->add_option("--iters", iters, "SeeSaw iteration cap")->capture_default_str();
  cmd_attack->add_option("--tol", tol, "SeeSaw convergence tolerance")->capture_default_str();
  cmd_attack->add_option("--seed", attack_seed, "Root seed")->capture_default_str();

  // --- keyrate ---------------------------------------------------------
  auto* cmd_keyrate = app.add_subcommand("keyrate", "Key-rate-vs-S curve over a q grid");
  double q_min = 0.0, q_max = 1.0, q_step = 0.01;
  std::string kr_coloring = "sm";
  int kr_restarts = 20, kr_iters = 500;
  double kr_tol = 1e-10;
  std::uint64_t kr_seed = 1;
  cmd_keyrate->add_option("--q-min", q_min, "Grid start")->capture_default_str();
  cmd_keyrate->add_option("--q-max", q_max, "Grid end")->capture_default_str();
  cmd_keyrate->add_option("--q-step", q_step, "Grid step")->capture_default_str();
  cmd_keyrate->add_option("--coloring", kr_coloring, "sm | best")->capture_default_str();
  cmd_keyrate->add_option("--restarts", kr_restarts, "SeeSaw restarts")->capture_default_str();
  cmd_keyrate->add_option("--iters", kr_iters, "SeeSaw iteration cap")->capture_default_str();
  cmd_keyrate->add_option("--tol", kr_tol, "SeeSaw convergence tolerance")->capture_default_str();
  cmd_keyrate->add_option("--seed", kr_seed, "Root seed")->capture_default_str();

  // --- randomness ------------------------------------------------------
  auto* cmd_rand = app.add_subcommand("randomness", "Certified-randomness bounds at (S1, S2)");
  double s1 = 30.0, s2 = std::sqrt(5.0);
  cmd_rand->add_option("--s1", s1, "Observed S1")->required();
  cmd_rand->add_option("--s2", s2, "Observed S2")->required();

  // --- classical-bound -------------------------------------------------
  auto* cmd_bound =
      app.add_subcommand("classical-bound", "Exhaustive deterministic-strategy maximum");

  CLI11_PARSE(app, argc, argv);

  const auto& g = ExtendedGraph::standard();

  if (*cmd_witness) {
    RunManifest man;
    man.command = "witness";
    man.parameters["input"] = witness_input;
    man.input_digests[witness_input] = digest_file(witness_input);
    man.timestamp = timestamp;
    const CorrelationTable table = ingest_tables_file(witness_input, g);
    const WitnessReport w = evaluate_witness(table, g);
    Json j;
    j["manifest"] = man.to_json();
    j.update(witness_json(w));
    write_file(join_path(out_dir, "witness.json"), j.dump(2) + "\n");
    print_witness_summary(w);
    return 0;
  }

  if (*cmd_sim) {
    RunManifest man;
    man.command = "simulate";
    man.seed = seed;
    man.parameters = Json{{"rounds", rounds},
                          {"source", source_kind},
                          {"mu", mu},
                          {"g2", g2},
                          {"two_photon_prob", two_photon},
                          {"dark", dark},
                          {"nmax", nmax},
                          {"verification_fraction", vfrac},
                          {"strategy", strategy_kind},
                          {"q", q_sim},
                          {"resamples", resamples}};
    man.timestamp = timestamp;

    ProtocolConfig config;
    config.rounds = rounds;
    config.seed = seed;
    config.verification_fraction = vfrac;
    config.source = source_from_flags(source_kind, mu, g2, two_photon, dark, nmax);
    if (strategy_kind == "ideal") {
      config.strategy = ideal_strategy();
    } else if (strategy_kind == "sm-attack") {
      config.strategy = sm_attack_strategy();
      for (int x = 0; x <= 8; ++x)
        config.strategy.preparations[x] = eve_channel(config.strategy.rho(x), q_sim);
    } else {
      throw ValidationError("unknown strategy '" + strategy_kind + "'");
    }

    auto records = run_rounds(config);
    SiftedResult sifted = sift(records, g, vfrac, seed);

    const std::string man_line = "# manifest " + man.to_json().dump() + "\n";
    std::string csv = man_line + "x,y,z,phase\n";
    std::uint64_t discarded = 0;
    for (const auto& r : records) {
      const char* phase = r.phase == Phase::verification ? "verification"
                          : r.phase == Phase::key        ? "key"
                                                         : "discarded";
      if (r.phase == Phase::discarded) ++discarded;
      csv += std::to_string(r.x) + "," + std::to_string(r.y) + "," + std::to_string(r.z) +
             "," + phase + "\n";
    }
    write_file(join_path(out_dir, "rounds.csv"), csv);

    Json keys;
    keys["manifest"] = man.to_json();
    keys["n_bits"] = sifted.alice_key.size();
    keys["alice_key_hex"] = hex_pack(sifted.alice_key);
    keys["bob_key_hex"] = hex_pack(sifted.bob_key);
    keys["empirical_Pk"] = sifted.empirical_Pk;
    keys["agreement_rate"] = sifted.agreement_rate;
    keys["degenerate"] = sifted.degenerate;
    write_file(join_path(out_dir, "keys.json"), keys.dump(2) + "\n");

    std::printf("rounds        = %llu (%llu discarded as no-click)\n",
                static_cast<unsigned long long>(rounds),
                static_cast<unsigned long long>(discarded));
    std::printf("key bits      = %zu\n", sifted.alice_key.size());
    std::printf("empirical Pk  = %.6f (30/144 = %.6f)\n", sifted.empirical_Pk, 30.0 / 144.0);
    std::printf("agreement     = %.6f\n", sifted.agreement_rate);
    if (sifted.degenerate) std::printf("warning: key pool is empty\n");

    if (!sifted.missing_pairs.empty()) {
      std::ostringstream os;
      os << "verification pool is missing (x,y) pairs:";
      for (auto [x, y] : sifted.missing_pairs) os << " (" << x << "," << y << ")";
      throw ValidationError(os.str());
    }
    const WitnessReport w =
        estimate_witness_errors(sifted.verification_counts, resamples, seed);
    Json j;
    j["manifest"] = man.to_json();
    j.update(witness_json(w));
    j["empirical_Pk"] = sifted.empirical_Pk;
    j["agreement_rate"] = sifted.agreement_rate;
    write_file(join_path(out_dir, "witness.json"), j.dump(2) + "\n");
    print_witness_summary(w);
    return 0;
  }

  if (*cmd_sweep) {
    if (thr_opt->count() > 0) threshold = threshold_val;
    RunManifest man;
    man.command = "sweep-mu";
    man.parameters = Json{{"mu_min", mu_min}, {"mu_max", mu_max},   {"points", mu_points},
                          {"mu", mu_list},    {"input", sweep_input}, {"dark", sweep_dark},
                          {"nmax", sweep_nmax}};
    man.timestamp = timestamp;

    CorrelationTable baseline;
    if (sweep_input.empty()) {
      baseline = born_correlations(ideal_strategy());
    } else {
      man.input_digests[sweep_input] = digest_file(sweep_input);
      baseline = ingest_tables_file(sweep_input, g);
    }
    std::vector<double> grid = mu_list;
    if (grid.empty()) {
      if (mu_points < 1) throw ValidationError("sweep: need at least one grid point");
      for (int i = 0; i < mu_points; ++i)
        grid.push_back(mu_min + (mu_max - mu_min) * i / std::max(1, mu_points - 1));
    }
    SourceModel tmpl = SourceModel::coherent(1.0);
    tmpl.dark_count_prob = sweep_dark;
    tmpl.n_max = sweep_nmax;
    const auto points = sweep_mu(baseline, grid, tmpl, g);

    std::string csv = "# manifest " + man.to_json().dump() + "\nmu,S1,S2,S\n";
    for (const auto& p : points) {
      csv += format_double(p.mu) + "," + format_double(p.S1) + "," + format_double(p.S2) +
             "," + format_double(p.S) + "\n";
    }
    write_file(join_path(out_dir, "sweep.csv"), csv);
    std::printf("sweep: %zu points, S2 from %.6f to %.6f\n", points.size(),
                points.front().S2, points.back().S2);
    if (threshold) {
      // Continuous crossing by bisection on the same degradation model.
      auto s2_at = [&](double m) {
        SourceModel mm = tmpl;
        mm.mu = m;
        return evaluate_witness(degrade_correlations(baseline, mm), g).S2;
      };
      double lo = grid.front(), hi = grid.back();
      if ((s2_at(lo) - *threshold) * (s2_at(hi) - *threshold) > 0) {
        std::printf("S2 does not cross %.6f inside [%g, %g]\n", *threshold, lo, hi);
      } else {
        for (int i = 0; i < 200; ++i) {
          const double mid = 0.5 * (lo + hi);
          if ((s2_at(lo) - *threshold) * (s2_at(mid) - *threshold) <= 0)
            hi = mid;
          else
            lo = mid;
        }
        std::printf("S2 crosses %.6f at mu = %.6f\n", *threshold, 0.5 * (lo + hi));
      }
    }
    return 0;
  }

  if (*cmd_attack) {
    RunManifest man;
    man.command = "attack";
    man.seed = attack_seed;
    man.parameters = Json{{"q", q_attack},       {"coloring", coloring_kind},
                          {"restarts", restarts}, {"iters", iters},
                          {"tol", tol}};
    man.timestamp = timestamp;

    SeesawOptions opts{restarts, iters, tol, attack_seed};
    SeesawResult sr;
    if (coloring_kind == "sm") {
      sr = seesaw_max_S(q_attack, ExtendedGraph::reference_coloring(), g, opts);
    } else if (coloring_kind == "best") {
      sr = seesaw_max_S(q_attack, g, opts);
    } else {
      throw ValidationError("unknown coloring '" + coloring_kind + "' (use sm or best)");
    }
    const KeyRateReport kr = evaluate_attack(q_attack, sr.strategy, {q_attack, sr.coloring}, g);

    Json j;
    j["manifest"] = man.to_json();
    j["q"] = q_attack;
    j["S_max"] = sr.S_max;
    j["converged"] = sr.converged;
    j["iterations"] = sr.iterations;
    j["coloring"] = sr.coloring;
    j["I_AB"] = kr.I_AB;
    j["I_AE"] = kr.I_AE;
    j["rate_per_key_round"] = kr.r;
    j["overall_rate"] = kr.overall;
    j["overall_rate_clamped"] = std::max(0.0, kr.overall);
    j["strategy"] = strategy_json(sr.strategy);
    write_file(join_path(out_dir, "attack.json"), j.dump(2) + "\n");

    std::printf("q = %.4f: S_max = %.6f%s\n", q_attack, sr.S_max,
                sr.converged ? "" : " (not converged)");
    std::printf("I(A:B) = %.6f, I(A:E) = %.6f, r = %.6f\n", kr.I_AB, kr.I_AE, kr.r);
    std::printf("overall rate = Pk * r = %.6f%s\n", kr.overall,
                kr.overall < 0 ? " (negative: no secure key)" : "");
    return 0;
  }

  if (*cmd_keyrate) {
    RunManifest man;
    man.command = "keyrate";
    man.seed = kr_seed;
    man.parameters = Json{{"q_min", q_min},   {"q_max", q_max},
                          {"q_step", q_step}, {"coloring", kr_coloring},
                          {"restarts", kr_restarts}, {"iters", kr_iters},
                          {"tol", kr_tol}};
    man.timestamp = timestamp;

    if (q_step <= 0) throw ValidationError("keyrate: q-step must be positive");
    std::vector<double> grid;
    for (double q = q_min; q <= q_max + 1e-12; q += q_step) grid.push_back(std::min(q, 1.0));
    std::optional<Coloring> coloring;
    if (kr_coloring == "sm") {
      coloring = ExtendedGraph::reference_coloring();
    } else if (kr_coloring != "best") {
      throw ValidationError("unknown coloring '" + kr_coloring + "' (use sm or best)");
    }
    SeesawOptions opts{kr_restarts, kr_iters, kr_tol, kr_seed};
    const auto curve = key_rate_vs_S(grid, coloring, opts, g);

    std::string csv =
        "# manifest " + man.to_json().dump() + "\nq,S_max,I_AB,I_AE,rate_per_key_round,overall_rate\n";
    for (const auto& p : curve) {
      csv += format_double(p.q) + "," + format_double(p.S_max) + "," + format_double(p.I_AB) +
             "," + format_double(p.I_AE) + "," + format_double(p.r) + "," +
             format_double(p.overall) + "\n";
    }
    write_file(join_path(out_dir, "keyrate.csv"), csv);
    std::printf("keyrate: %zu points; S_max %.6f -> %.6f; overall rate %.6f -> %.6f\n",
                curve.size(), curve.front().S_max, curve.back().S_max, curve.front().overall,
                curve.back().overall);
    return 0;
  }

  if (*cmd_rand) {
    RunManifest man;
    man.command = "randomness";
    man.parameters = Json{{"s1", s1}, {"s2", s2}};
    man.timestamp = timestamp;
    const RandomnessReport rep = randomness_bounds(s1, s2, g);
    Json j;
    j["manifest"] = man.to_json();
    j["S1"] = rep.S1_target;
    j["S2"] = rep.S2_target;
    j["ideal"] = Json{{"available", rep.ideal_available},
                      {"R_bits", rep.ideal_available ? rep.ideal_R : 0.0}};
    Json ach;
    ach["found"] = rep.achievable_found;
    if (rep.achievable_found) {
      ach["pstar"] = rep.achievable_pstar;
      ach["R_bits"] = rep.achievable_R;
    }
    j["achievable"] = ach;
    j["note"] = rep.note;
    write_file(join_path(out_dir, "randomness.json"), j.dump(2) + "\n");

    if (rep.ideal_available) {
      std::printf("ideal-case certified randomness R = %.6f bits\n", rep.ideal_R);
    } else {
      std::printf("no ideal-case certification at (S1=%.6f, S2=%.6f)\n", s1, s2);
    }
    if (rep.achievable_found) {
      std::printf("achievable guessing probability p* >= %.6f (R <= %.6f bits)\n",
                  rep.achievable_pstar, rep.achievable_R);
    }
    if (!rep.note.empty()) std::printf("note: %s\n", rep.note.c_str());
    return 0;
  }

  if (*cmd_bound) {
    RunManifest man;
    man.command = "classical-bound";
    man.timestamp = timestamp;
    const int bound = classical_bound_bruteforce(g);
    Json j;
    j["manifest"] = man.to_json();
    j["classical_bound"] = bound;
    j["assignments_checked"] = 16777216;
    write_file(join_path(out_dir, "classical_bound.json"), j.dump(2) + "\n");
    std::printf("classical bound S_c = %d (exhaustive over 8^8 deterministic strategies)\n",
                bound);
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const cqkd::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}

#include <doctest.h>

#include <cmath>

#include "cqkd/security.hpp"
#include "test_helpers.hpp"

using namespace cqkd;
using namespace cqkd::test;

namespace {

// Independent Shannon MI, straight from the definition.
double mi_oracle(const std::array<std::array<double, 2>, 2>& p) {
  const double pa[2] = {p[0][0] + p[0][1], p[1][0] + p[1][1]};
  const double pb[2] = {p[0][0] + p[1][0], p[0][1] + p[1][1]};
  double bits = 0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      if (p[a][b] > 0) bits += p[a][b] * std::log2(p[a][b] / (pa[a] * pb[b]));
  return bits;
}

// Closed-form optimum of the reference-coloring seesaw family.
double sm_family_oracle(double q) { return 26.0 + 2.0 * std::sqrt(9.0 + (1 - q) * (1 - q)); }

}  // namespace

TEST_SUITE("security") {

TEST_CASE("mutual information basics") {
  JointDistribution2x2 product{{{{0.3 * 0.6, 0.3 * 0.4}, {0.7 * 0.6, 0.7 * 0.4}}}};
  CHECK(mutual_information(product) == doctest::Approx(0.0).epsilon(1e-12));

  // perfectly correlated with marginal (8/30, 22/30): I = H(8/30)
  JointDistribution2x2 corr{{{{8.0 / 30, 0}, {0, 22.0 / 30}}}};
  const double h = mutual_information(corr);
  CHECK(h == doctest::Approx(mi_oracle(corr.p)).epsilon(1e-12));
  CHECK(std::abs(h - 0.8366) <= 1e-4);

  // Eve's joint at q = 0.54
  const double q = 0.54;
  JointDistribution2x2 eve{{{{q * 8.0 / 30, 0}, {(1 - q) * 8.0 / 30, 22.0 / 30}}}};
  CHECK(std::abs(mutual_information(eve) - 0.3292) <= 1e-4);

  // relabeling invariance and non-negativity
  Rng rng = Rng::child(41, "mi-prop");
  for (int trial = 0; trial < 200; ++trial) {
    JointDistribution2x2 j;
    double sum = 0;
    for (auto& row : j.p)
      for (double& v : row) sum += (v = rng.uniform01());
    for (auto& row : j.p)
      for (double& v : row) v /= sum;
    const double mi = mutual_information(j);
    CHECK(mi >= -1e-12);
    JointDistribution2x2 swapped{{{{j.p[1][1], j.p[1][0]}, {j.p[0][1], j.p[0][0]}}}};
    CHECK(mutual_information(swapped) == doctest::Approx(mi).epsilon(1e-10));
  }

  JointDistribution2x2 bad{{{{0.5, 0.2}, {0.1, 0.1}}}};
  CHECK_THROWS_AS(mutual_information(bad), ValidationError);
}

TEST_CASE("eve channel fixes diagonal states and dephases superpositions") {
  Mat3c diag = Mat3c::Zero();
  diag(0, 0) = 0.2;
  diag(1, 1) = 0.3;
  diag(2, 2) = 0.5;
  for (double q : {0.0, 0.3, 1.0})
    CHECK(frobenius(eve_channel(diag, q) - diag) < 1e-14);

  const Mat3c rho = projector(Vec3c(Vec3c(1, 1, 0) / std::sqrt(2.0)));
  Mat3c half = Mat3c::Zero();
  half(0, 0) = half(1, 1) = 0.5;
  CHECK(frobenius(eve_channel(rho, 1.0) - half) < 1e-14);
  CHECK(frobenius(eve_channel(rho, 0.0) - rho) < 1e-14);

  CHECK_THROWS_AS(eve_channel(rho, 1.5), ValidationError);
  CHECK_THROWS_AS(eve_channel(Mat3c(2.0 * rho), 0.5), ValidationError);
}

TEST_CASE("channel equivalence: dephasing form vs explicit 9-dim unitary") {
  CHECK(is_unitary9(attack_unitary()));
  Rng rng = Rng::child(42, "channel-eq");
  for (int trial = 0; trial < 1000; ++trial) {
    const Mat3c rho = random_density(rng);
    const double q = rng.uniform01();
    CHECK(frobenius(eve_channel(rho, q) - eve_channel_via_unitary(rho, q)) <= 1e-12);
  }
}

TEST_CASE("coloring enumeration matches the exhaustive filter") {
  const auto& g = ExtendedGraph::standard();
  const auto colorings = enumerate_colorings(g);

  // oracle: filter all 3^8 assignments
  int count = 0;
  bool found_reference = false;
  for (int idx = 0; idx < 6561; ++idx) {
    Coloring c{};
    int v = idx;
    for (int i = 0; i < 8; ++i) {
      c[i] = v % 3;
      v /= 3;
    }
    if (g.is_proper_coloring(c)) {
      ++count;
      if (c == ExtendedGraph::reference_coloring()) found_reference = true;
    }
  }
  CHECK(static_cast<int>(colorings.size()) == count);
  CHECK(found_reference);
  for (const auto& c : colorings) CHECK(g.is_proper_coloring(c));

  AttackModel improper{0.5, {0, 0, 1, 2, 1, 2, 0, 1}};  // color(1) == color(2)
  CHECK_THROWS_AS(improper.validate(), ValidationError);
  AttackModel ok{0.5, ExtendedGraph::reference_coloring()};
  CHECK_NOTHROW(ok.validate());
}

TEST_CASE("seesaw matches the closed-form family optimum") {
  const Coloring sm = ExtendedGraph::reference_coloring();
  SeesawOptions opts;
  opts.seed = 3;
  for (double q : {0.0, 0.2, 0.54, 0.8, 1.0}) {
    const SeesawResult r = seesaw_max_S(q, sm, ExtendedGraph::standard(), opts);
    CHECK(r.converged);
    CHECK(r.S_max == doctest::Approx(sm_family_oracle(q)).epsilon(1e-8));
    r.strategy.validate();
  }
}

TEST_CASE("seesaw endpoints") {
  const Coloring sm = ExtendedGraph::reference_coloring();
  SeesawOptions opts;
  opts.seed = 3;
  const auto& g = ExtendedGraph::standard();

  CHECK(seesaw_max_S(0.0, sm, g, opts).S_max >= 32.236068 - 1e-6);
  CHECK(seesaw_max_S(1.0, sm, g, opts).S_max <= 32.0 + 1e-6);
  const SeesawResult at_paper_q = seesaw_max_S(0.54, sm, g, opts);
  CHECK(std::abs(at_paper_q.S_max - 32.070) <= 1e-3);

  // the all-colorings search can only do better
  SeesawOptions fast = opts;
  fast.restarts = 10;
  const SeesawResult best = seesaw_max_S(0.54, g, fast);
  CHECK(best.S_max >= at_paper_q.S_max - 1e-9);
  CHECK(best.S_max <= 32.236068);  // q > 0 already bites
}

TEST_CASE("seesaw is monotone non-increasing in q") {
  const Coloring sm = ExtendedGraph::reference_coloring();
  SeesawOptions opts;
  opts.seed = 3;
  opts.restarts = 10;
  double prev = 1e9;
  for (double q = 0.0; q <= 1.0 + 1e-12; q += 0.1) {
    const double s = seesaw_max_S(q, sm, ExtendedGraph::standard(), opts).S_max;
    CHECK(s <= prev + 1e-7);
    prev = s;
  }
}

TEST_CASE("transcribed attack strategy reproduces the published point") {
  const Strategy s = sm_attack_strategy();
  s.validate();
  const auto& g = ExtendedGraph::standard();

  CHECK(born_correlations(s).p0(1, 1) == doctest::Approx(0.9932).epsilon(1e-9));

  // witness under the channel at q = 0.54
  Strategy effective = s;
  for (int x = 0; x <= 8; ++x) effective.preparations[x] = eve_channel(s.rho(x), kSmAttackQ);
  const WitnessReport w = evaluate_witness(born_correlations(effective), g);
  CHECK(std::abs(w.S - 32.070) <= 5e-3);
  CHECK(w.S1 == doctest::Approx(29.9184).epsilon(1e-6));
  CHECK(w.S2 == doctest::Approx(2.1513).epsilon(1e-3));

  // the sign as printed scores below the published value
  Strategy printed = sm_attack_strategy(false);
  for (int x = 0; x <= 8; ++x) printed.preparations[x] = eve_channel(printed.rho(x), kSmAttackQ);
  const WitnessReport wp = evaluate_witness(born_correlations(printed), g);
  CHECK(wp.S == doctest::Approx(31.767).epsilon(1e-3));
  CHECK(wp.S < w.S);

  const KeyRateReport kr =
      evaluate_attack(kSmAttackQ, s, {kSmAttackQ, ExtendedGraph::reference_coloring()}, g);
  CHECK(std::abs(kr.I_AB - 0.8109) <= 1e-3);
  CHECK(std::abs(kr.I_AE - 0.3292) <= 1e-4);
  CHECK(std::abs(kr.overall - 0.1004) <= 1e-3);
  CHECK(std::abs(kr.S_achieved - 32.070) <= 5e-3);
  CHECK(kr.overall == doctest::Approx(kKeyFraction * kr.r).epsilon(1e-12));
}

TEST_CASE("ideal strategy with no attack gives the reference rate") {
  const KeyRateReport kr = evaluate_attack(0.0, ideal_strategy(),
                                           {0.0, ExtendedGraph::reference_coloring()});
  CHECK(std::abs(kr.I_AB - 0.8366) <= 1e-4);
  CHECK(kr.I_AE == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::abs(kr.overall - 0.174) <= 1e-3);
  CHECK(kr.S_achieved == doctest::Approx(30.0 + std::sqrt(5.0)).epsilon(1e-9));
}

TEST_CASE("a full-strength attack leaves no key") {
  // q = 1: Eve knows f perfectly, Bob's channel is noisy, r <= 0 and unclamped.
  const SeesawResult sr =
      seesaw_max_S(1.0, ExtendedGraph::reference_coloring(), ExtendedGraph::standard());
  const KeyRateReport kr =
      evaluate_attack(1.0, sr.strategy, {1.0, ExtendedGraph::reference_coloring()});
  CHECK(kr.I_AE >= kr.I_AB - 1e-9);
  CHECK(kr.r <= 1e-9);
  CHECK(kr.overall == doctest::Approx(kKeyFraction * kr.r).epsilon(1e-12));
}

TEST_CASE("key-rate curve endpoints and anchors") {
  SeesawOptions opts;
  opts.seed = 3;
  opts.restarts = 10;
  const std::vector<double> grid{0.0, 0.54, 0.8, 1.0};
  const auto curve =
      key_rate_vs_S(grid, ExtendedGraph::reference_coloring(), opts);
  REQUIRE(curve.size() == 4);

  // q = 0 endpoint of the attack-constrained curve: S = 26 + 2 sqrt(10).
  // Oracle for the rate: the family optimum has cos^2(alpha) with
  // tan(2 alpha) = (1-q)/3; Bob's key joint follows from the 8 diagonal and
  // 22 edge terms.
  auto family_rate = [&](double q) {
    const double t2a = (1 - q) / 3.0;
    const double c2a = 1.0 / std::sqrt(1 + t2a * t2a);
    const double cos_sq = 0.5 * (1 + c2a);
    const double dsum = 4 * cos_sq + 4, esum = 8 * (1 - cos_sq);
    const std::array<std::array<double, 2>, 2> j_zf{
        {{dsum / 30, esum / 30}, {(8 - dsum) / 30, (22 - esum) / 30}}};
    const std::array<std::array<double, 2>, 2> j_ef{
        {{q * 8.0 / 30, 0}, {(1 - q) * 8.0 / 30, 22.0 / 30}}};
    return kKeyFraction * (mi_oracle(j_zf) - mi_oracle(j_ef));
  };

  CHECK(curve[0].S_max == doctest::Approx(26.0 + 2.0 * std::sqrt(10.0)).epsilon(1e-8));
  CHECK(curve[0].overall == doctest::Approx(family_rate(0.0)).epsilon(1e-6));
  CHECK(std::abs(curve[0].overall - 0.158171) <= 1e-3);

  CHECK(std::abs(curve[1].S_max - 32.070) <= 1e-3);
  CHECK(std::abs(curve[1].overall - 0.1004) <= 1e-3);

  for (const auto& p : curve) {
    CHECK(p.overall == doctest::Approx(kKeyFraction * p.r).epsilon(1e-12));
    if (p.S_max <= 32.0) CHECK(p.overall <= 1e-6);
  }
  CHECK(curve.back().S_max <= 32.0 + 1e-6);
  CHECK(curve.back().overall <= 1e-6);
}

}  // TEST_SUITE

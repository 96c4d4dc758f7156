// Python bindings for the core operations: witness evaluation, source
// models, protocol simulation, and the attack/randomness analysis.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cqkd/contextuality.hpp"
#include "cqkd/protocol.hpp"
#include "cqkd/randomness.hpp"
#include "cqkd/security.hpp"
#include "cqkd/source_model.hpp"

namespace py = pybind11;
using namespace cqkd;

namespace {

py::dict witness_dict(const WitnessReport& w) {
  py::dict d;
  d["S1"] = w.S1;
  d["S2"] = w.S2;
  d["S"] = w.S;
  d["S_normalized"] = w.S_normalized;
  d["classical_bound"] = w.classical_bound;
  d["quantum_reference"] = w.quantum_reference;
  d["violation"] = w.violation;
  if (w.sigma_S) {
    d["sigma_S1"] = *w.sigma_S1;
    d["sigma_S2"] = *w.sigma_S2;
    d["sigma_S"] = *w.sigma_S;
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_cqkd, m) {
  m.doc() = "Contextuality-based semi-device-independent QKD toolkit";

  py::register_exception<ValidationError>(m, "ValidationError");

  py::class_<Strategy>(m, "Strategy")
      .def(py::init<>())
      .def("rho", [](const Strategy& s, int x) { return Mat3c(s.rho(x)); })
      .def("m0", [](const Strategy& s, int y) { return Mat3c(s.m0(y)); })
      .def("set_rho", [](Strategy& s, int x, const Mat3c& m) { s.preparations.at(x) = m; })
      .def("set_m0", [](Strategy& s, int y, const Mat3c& m) { s.measurements.at(y - 1) = m; })
      .def("validate", [](const Strategy& s) { s.validate(); });

  py::class_<CorrelationTable>(m, "CorrelationTable")
      .def(py::init<>())
      .def("set_p0", &CorrelationTable::set_p0)
      .def("set_counts", &CorrelationTable::set_counts)
      .def("has", &CorrelationTable::has)
      .def("p0", &CorrelationTable::p0)
      .def("p1", &CorrelationTable::p1);

  py::class_<SourceModel>(m, "SourceModel")
      .def_static("single_photon", &SourceModel::single_photon)
      .def_static("quantum_dot", &SourceModel::quantum_dot, py::arg("two_photon_prob"))
      .def_static("coherent", &SourceModel::coherent, py::arg("mu"))
      .def_readwrite("mu", &SourceModel::mu)
      .def_readwrite("two_photon_prob", &SourceModel::two_photon_prob)
      .def_readwrite("dark_count_prob", &SourceModel::dark_count_prob)
      .def_readwrite("n_max", &SourceModel::n_max);

  m.def("kcbs_vectors", [] {
    std::vector<Vec3c> out;
    for (const auto& v : kcbs_vectors()) out.push_back(v);
    return out;
  });
  m.def("ideal_strategy", &ideal_strategy);
  m.def("sm_attack_strategy", &sm_attack_strategy, py::arg("maximize_sign") = true);
  m.def("born_correlations",
        [](const Strategy& s) { return born_correlations(s); });
  m.def("evaluate_witness",
        [](const CorrelationTable& t) { return witness_dict(evaluate_witness(t)); });
  m.def("classical_bound", [](int workers) { return classical_bound_bruteforce(ExtendedGraph::standard(), workers); },
        py::arg("workers") = 0);
  m.def("ingest_tables", [](const std::string& path) { return ingest_tables_file(path); });

  m.def("photon_number_pmf", &photon_number_pmf);
  m.def("g2_of_model", &g2_of_model);
  m.def("two_photon_prob_for_g2", &two_photon_prob_for_g2);
  m.def("degrade_correlations", &degrade_correlations);
  m.def("sweep_mu", [](const CorrelationTable& baseline, const std::vector<double>& grid,
                       const SourceModel& tmpl) {
    py::list out;
    for (const auto& p : sweep_mu(baseline, grid, tmpl)) {
      py::dict d;
      d["mu"] = p.mu;
      d["S1"] = p.S1;
      d["S2"] = p.S2;
      d["S"] = p.S;
      out.append(d);
    }
    return out;
  });

  m.def("simulate",
        [](std::uint64_t rounds, std::uint64_t seed, const Strategy& strategy,
           const SourceModel& source, double verification_fraction, int resamples) {
          ProtocolConfig config{rounds, seed, strategy, source, verification_fraction};
          auto records = run_rounds(config);
          const SiftedResult sifted =
              sift(records, ExtendedGraph::standard(), verification_fraction, seed);
          py::dict d;
          d["empirical_Pk"] = sifted.empirical_Pk;
          d["agreement_rate"] = sifted.agreement_rate;
          d["n_key_bits"] = sifted.alice_key.size();
          d["degenerate"] = sifted.degenerate;
          if (sifted.witness_estimate) {
            const WitnessReport w = estimate_witness_errors(sifted.verification_counts,
                                                            resamples, seed);
            d["witness"] = witness_dict(w);
          }
          return d;
        },
        py::arg("rounds"), py::arg("seed"), py::arg("strategy"), py::arg("source"),
        py::arg("verification_fraction") = 0.5, py::arg("resamples") = 200);

  m.def("mutual_information", [](const std::array<std::array<double, 2>, 2>& p) {
    JointDistribution2x2 j;
    j.p = p;
    return mutual_information(j);
  });
  m.def("eve_channel", [](const Mat3c& rho, double q) { return eve_channel(rho, q); });
  m.def("enumerate_colorings", [] { return enumerate_colorings(); });
  m.def("reference_coloring", &ExtendedGraph::reference_coloring);
  m.def("seesaw_max_S",
        [](double q, std::optional<Coloring> coloring, int restarts, int iters, double tol,
           std::uint64_t seed) {
          SeesawOptions opts{restarts, iters, tol, seed};
          const SeesawResult r = coloring
                                     ? seesaw_max_S(q, *coloring, ExtendedGraph::standard(), opts)
                                     : seesaw_max_S(q, ExtendedGraph::standard(), opts);
          py::dict d;
          d["S_max"] = r.S_max;
          d["strategy"] = r.strategy;
          d["coloring"] = r.coloring;
          d["converged"] = r.converged;
          d["iterations"] = r.iterations;
          return d;
        },
        py::arg("q"), py::arg("coloring") = std::nullopt, py::arg("restarts") = 20,
        py::arg("iters") = 500, py::arg("tol") = 1e-10, py::arg("seed") = 0);
  m.def("evaluate_attack",
        [](double q, const Strategy& s, const Coloring& coloring) {
          const KeyRateReport kr = evaluate_attack(q, s, {q, coloring});
          py::dict d;
          d["I_AB"] = kr.I_AB;
          d["I_AE"] = kr.I_AE;
          d["r"] = kr.r;
          d["overall"] = kr.overall;
          d["S_achieved"] = kr.S_achieved;
          return d;
        },
        py::arg("q"), py::arg("strategy"), py::arg("coloring"));
  m.def("randomness_bounds", [](double s1, double s2) {
    const RandomnessReport r = randomness_bounds(s1, s2);
    py::dict d;
    d["ideal_available"] = r.ideal_available;
    d["ideal_R"] = r.ideal_R;
    d["achievable_found"] = r.achievable_found;
    d["achievable_pstar"] = r.achievable_pstar;
    d["achievable_R"] = r.achievable_R;
    d["note"] = r.note;
    return d;
  });
}

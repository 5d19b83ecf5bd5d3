#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qbs/apparatus.hpp"
#include "qbs/metrics.hpp"
#include "qbs/montecarlo.hpp"

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)

namespace py = pybind11;
using namespace qbs;

namespace {

py::tuple to_tuple(const PathState& s) { return py::make_tuple(s.amp1, s.amp2); }

py::list to_nested(const PathDensity& rho) {
  py::list out;
  for (Path r : {Path::One, Path::Two}) {
    py::list row;
    for (Path c : {Path::One, Path::Two}) row.append(rho.at(r, c));
    out.append(row);
  }
  return out;
}

py::dict counts_to_dict(const CountsTable& t) {
  std::vector<double> phi;
  std::vector<std::uint64_t> n1b, n2b, n1p, n2p, lost;
  for (const auto& row : t.rows) {
    phi.push_back(row.phi);
    n1b.push_back(row.count(Path::One, AncillaOutcome::B));
    n2b.push_back(row.count(Path::Two, AncillaOutcome::B));
    n1p.push_back(row.count(Path::One, AncillaOutcome::BPerp));
    n2p.push_back(row.count(Path::Two, AncillaOutcome::BPerp));
    lost.push_back(row.lost);
  }
  py::dict d;
  d["phi_rad"] = phi;
  d["n1_B"] = n1b;
  d["n2_B"] = n2b;
  d["n1_Bperp"] = n1p;
  d["n2_Bperp"] = n2p;
  d["n_lost"] = lost;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Quantum-controlled beam splitter interferometer: states, metrics, Monte Carlo";

  py::enum_<Blocking>(m, "Blocking")
      .value("NONE", Blocking::None)
      .value("BLOCK_PATH1", Blocking::BlockPath1)
      .value("BLOCK_PATH2", Blocking::BlockPath2);

  py::enum_<AncillaOutcome>(m, "AncillaOutcome")
      .value("B", AncillaOutcome::B)
      .value("B_PERP", AncillaOutcome::BPerp);

  py::class_<DeviceSettings>(m, "DeviceSettings")
      .def(py::init([](double alpha, double beta, double delta1, double delta2) {
             return DeviceSettings{alpha, beta, delta1, delta2};
           }),
           py::arg("alpha") = std::numbers::pi / 4, py::arg("beta") = 0.0,
           py::arg("delta1") = 0.0, py::arg("delta2") = 0.0)
      .def_readwrite("alpha", &DeviceSettings::alpha)
      .def_readwrite("beta", &DeviceSettings::beta)
      .def_readwrite("delta1", &DeviceSettings::delta1)
      .def_readwrite("delta2", &DeviceSettings::delta2);

  py::class_<NoiseModel>(m, "NoiseModel")
      .def(py::init([](double dark_rate, double contrast, double jitter, double efficiency) {
             NoiseModel n{dark_rate, contrast, jitter, efficiency};
             n.validate();
             return n;
           }),
           py::arg("dark_rate") = 0.0, py::arg("contrast") = 1.0, py::arg("jitter") = 0.0,
           py::arg("efficiency") = 1.0)
      .def_readonly("dark_rate", &NoiseModel::dark_rate)
      .def_readonly("contrast", &NoiseModel::contrast)
      .def_readonly("jitter", &NoiseModel::phase_jitter_sigma)
      .def_readonly("efficiency", &NoiseModel::efficiency);

  auto value = [](Estimate DualityReport::*field) {
    return [field](const DualityReport& r) { return (r.*field).value; };
  };
  auto error = [](Estimate DualityReport::*field) {
    return [field](const DualityReport& r) { return (r.*field).stderr_; };
  };
  py::class_<DualityReport>(m, "DualityReport")
      .def_property_readonly("V", value(&DualityReport::V))
      .def_property_readonly("D", value(&DualityReport::D))
      .def_property_readonly("sumVD", value(&DualityReport::sumVD))
      .def_property_readonly("Vg", value(&DualityReport::Vg))
      .def_property_readonly("Dg", value(&DualityReport::Dg))
      .def_property_readonly("sumG", value(&DualityReport::sumG))
      .def_property_readonly("V_stderr", error(&DualityReport::V))
      .def_property_readonly("D_stderr", error(&DualityReport::D))
      .def_property_readonly("sumVD_stderr", error(&DualityReport::sumVD))
      .def_property_readonly("Vg_stderr", error(&DualityReport::Vg))
      .def_property_readonly("Dg_stderr", error(&DualityReport::Dg))
      .def_property_readonly("sumG_stderr", error(&DualityReport::sumG))
      .def_readonly("visibility_undefined", &DualityReport::visibility_undefined)
      .def_readonly("distinguishability_undefined", &DualityReport::distinguishability_undefined);

  m.def(
      "evolve",
      [](const DeviceSettings& d, double phi, Blocking b) {
        const JointState s = evolve({d, phi, b});
        return std::vector<Amplitude>(s.v.begin(), s.v.end());
      },
      py::arg("device"), py::arg("phi"), py::arg("blocking") = Blocking::None,
      "Joint amplitudes in the order |1a>, |2a>, |1p>, |2p>.");

  m.def(
      "partial_trace",
      [](const DeviceSettings& d, double phi, Blocking b) {
        return to_nested(partial_trace_ancilla(evolve({d, phi, b})));
      },
      py::arg("device"), py::arg("phi"), py::arg("blocking") = Blocking::None);

  m.def(
      "run",
      [](const DeviceSettings& d, double phi, Blocking b) {
        const RunResult r = run({d, phi, b});
        py::dict out;
        for (AncillaOutcome o : kOutcomes) {
          const auto& x = r[o];
          py::dict e;
          e["path"] = to_tuple(x.path);
          e["success_prob"] = x.success_prob;
          e["p1"] = x.conditional.p1;
          e["p2"] = x.conditional.p2;
          e["joint_p1"] = x.joint.p1;
          e["joint_p2"] = x.joint.p2;
          e["defined"] = x.defined;
          out[py::cast(o)] = e;
        }
        return out;
      },
      py::arg("device"), py::arg("phi"), py::arg("blocking") = Blocking::None);

  m.def("particle_state", [](double phi) { return to_tuple(particle_state(phi)); },
        py::arg("phi"));
  m.def(
      "wave_state",
      [](double phi, double d1, double d2) { return to_tuple(wave_state(phi, d1, d2)); },
      py::arg("phi"), py::arg("delta1") = 0.0, py::arg("delta2") = 0.0);

  m.def(
      "fringe_scan",
      [](const DeviceSettings& d, AncillaOutcome o, int points) {
        const FringeScan scan = fringe_scan(d, o, points);
        std::vector<double> phi, p2, p1, succ;
        for (const auto& e : scan.entries) {
          phi.push_back(e.phi);
          p2.push_back(e.p2_cond);
          p1.push_back(e.p1_cond);
          succ.push_back(e.success_prob);
        }
        py::dict out;
        out["phi_rad"] = phi;
        out["p2_cond"] = p2;
        out["p1_cond"] = p1;
        out["success_prob"] = succ;
        return out;
      },
      py::arg("device"), py::arg("outcome") = AncillaOutcome::B, py::arg("points") = 360);

  m.def("visibility", [](const DeviceSettings& d, AncillaOutcome o) { return visibility(d, o); },
        py::arg("device"), py::arg("outcome") = AncillaOutcome::B);
  m.def("distinguishability", &distinguishability, py::arg("device"),
        py::arg("outcome") = AncillaOutcome::B);
  m.def("duality_sum", &duality_sum, py::arg("device"), py::arg("outcome") = AncillaOutcome::B);
  m.def("generalized_metrics", &generalized_metrics, py::arg("device"));
  m.def("full_report", &full_report, py::arg("device"), py::arg("outcome") = AncillaOutcome::B);
  m.def(
      "mixed_final_state",
      [](double alpha, double phi, double d1, double d2) {
        return to_nested(mixed_final_state(alpha, phi, d1, d2));
      },
      py::arg("alpha"), py::arg("phi"), py::arg("delta1") = 0.0, py::arg("delta2") = 0.0);

  m.def(
      "simulate",
      [](const DeviceSettings& d, const NoiseModel& noise, std::uint64_t shots, int points,
         std::uint64_t seed, AncillaOutcome o) {
        ShotPlan plan{shots, ShotPlan::uniform_grid(points), seed};
        ExperimentCounts counts;
        {
          py::gil_scoped_release release;
          counts = sample_experiment(d, noise, plan);
        }
        py::dict tables;
        tables["open"] = counts_to_dict(counts.open);
        tables["block_path1"] = counts_to_dict(counts.block_path1);
        tables["block_path2"] = counts_to_dict(counts.block_path2);
        return py::make_tuple(estimate_metrics(counts, o), tables);
      },
      py::arg("device"), py::arg("noise") = NoiseModel{}, py::arg("shots") = 100000,
      py::arg("points") = 16, py::arg("seed") = 1, py::arg("outcome") = AncillaOutcome::B,
      "Samples the open and both blocked runs; returns (estimates, counts).");

#ifdef VERSION_INFO
  m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
  m.attr("__version__") = "dev";
#endif
}

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "exchlab/cli/scenario.hpp"
#include "exchlab/errors.hpp"
#include "exchlab/ramsey/analysis.hpp"
#include "exchlab/rotor/phases.hpp"
#include "exchlab/rotor/spectrum.hpp"
#include "exchlab/zeeman/pulse.hpp"

namespace py = pybind11;
using namespace exchlab;

namespace {

fock::Statistics stats_of(const std::string& s) {
  if (s == "boson") return fock::Statistics::boson();
  if (s == "fermion") return fock::Statistics::fermion();
  throw ConfigInvalid("statistics must be 'boson' or 'fermion'");
}

py::dict fringe(const std::string& statistics, const std::string& variant, int n, int points) {
  const auto v = variant == "two_dim" ? ramsey::Variant::two_dim : ramsey::Variant::one_dim;
  const auto plan = ramsey::build_sequence(n, v, {});
  const auto scan = ramsey::fringe_scan(plan, stats_of(statistics), ramsey::ideal_pulse_bank,
                                        ramsey::uniform_grid(points));
  std::vector<double> phi, parity;
  for (const auto& s : scan.samples) {
    phi.push_back(s.control_phase);
    parity.push_back(s.parity);
  }
  py::dict d;
  d["phase"] = scan.fit.phase;
  d["visibility"] = scan.fit.visibility;
  d["control_phase"] = phi;
  d["parity"] = parity;
  return d;
}

py::dict rotor_spectrum(const std::vector<double>& a, const std::string& statistics, int N, int levels) {
  const rotor::RotorModel model(rotor::TrapConfig::calcium_default());
  const auto h = rotor::linear_hamiltonian(model, rotor::AngularBasis(rotor::dynamics_sector(stats_of(statistics)), N));
  const auto rows = rotor::sweep_spectrum(h, a, levels);
  Eigen::MatrixXd ex(rows.size(), levels - 1);
  for (std::size_t i = 0; i < rows.size(); ++i) ex.row(static_cast<Eigen::Index>(i)) = rows[i].excitations.transpose();
  py::dict d;
  d["a"] = a;
  d["excitations"] = ex;
  d["min_gap"] = rotor::minimum_gap(rows).min_gap;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "exchlab numerical core";
  static py::exception<Error> error(m, "ExchlabError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      error((e.name() + ": " + e.what()).c_str());
    }
  });

  m.def("fringe", &fringe, py::arg("statistics") = "boson", py::arg("variant") = "one_dim", py::arg("n") = 10,
        py::arg("points") = 32);
  m.def("thermal_visibility", [](double p0) {
    return ramsey::thermal_visibility(ramsey::ThermalOccupation::isotropic(std::cbrt(p0))).visibility;
  }, py::arg("p0"));

  m.def("zeeman_p_err", [](int n, double rho) { return zeeman::p_err(zeeman::GradientPulseConfig::from_rho(n, rho)); },
        py::arg("n"), py::arg("rho"));
  m.def("zeeman_residual_phase", [](int n, double rho) {
    return zeeman::fringe_phase_correction(zeeman::GradientPulseConfig::from_rho(n, rho)).residual;
  }, py::arg("n"), py::arg("rho"));

  m.def("critical_splitting", &rotor::critical_splitting, py::arg("q"), py::arg("omega_perp"));
  m.def("equilibrium_distance", [](double mass, double w) { return rotor::equilibrium_distance(mass, w); },
        py::arg("mass"), py::arg("omega_perp"));
  m.def("aharonov_bohm_phase", [](double B, double r0) { return rotor::aharonov_bohm_phase(B, r0); },
        py::arg("B_tesla"), py::arg("r0"));
  m.def("rotor_spectrum", &rotor_spectrum, py::arg("a"), py::arg("statistics") = "fermion", py::arg("N") = 512,
        py::arg("levels") = 4);
  m.def("calcium_two_r0", [] { return 2 * rotor::RotorModel(rotor::TrapConfig::calcium_default()).r0(); });

  m.def("commands", &cli::commands);
  m.def("_default_config", [](const std::string& c) { return cli::default_config(c).dump(); });
  m.def("_run", [](const std::string& command, const std::string& config, const std::string& out, int threads) {
    cli::RunOptions o;
    o.out = out;
    o.threads = threads;
    const auto cfg = cli::resolve_config(command, cli::json::parse(config));
    py::gil_scoped_release release;
    return cli::run(command, cfg, o).manifest.dump();
  });
}

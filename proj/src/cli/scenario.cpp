#include "exchlab/cli/scenario.hpp"

#include <CLI11.hpp>
#include <Eigen/Core>
#include <boost/version.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <unistd.h>

#include "exchlab/constants.hpp"
#include "exchlab/errors.hpp"
#include "exchlab/ramsey/analysis.hpp"
#include "exchlab/rotor/phases.hpp"
#include "exchlab/rotor/propagate.hpp"
#include "exchlab/rotor/spectrum.hpp"
#include "exchlab/util/parallel.hpp"
#include "exchlab/zeeman/pulse.hpp"

extern "C" void ilaver_(int* major, int* minor, int* patch);

namespace exchlab::cli {

namespace fs = std::filesystem;
using std::numbers::pi;

namespace {

json trap_defaults() {
  return {{"Omega_rf_hz", 20e6}, {"q", 0.2}, {"omega_z_hz", 1.4e6}, {"mass_u", 39.96259}};
}

json ramp_defaults() {
  return {{"a_start", -4e-4}, {"a_end", 4e-4}, {"T", 2e-3}, {"N", 512}, {"gamma_points", 401}};
}

json params_defaults(const std::string& command) {
  if (command == "fringe") {
    return {{"statistics", "boson"}, {"variant", "one_dim"}, {"n", 10},
            {"points", 32},          {"layout", "crossed"},  {"scanned_stage", "middle_pi"}};
  }
  if (command == "dephase") {
    return {{"statistics", "boson"},
            {"variants", {"one_dim", "two_dim"}},
            {"n", 10},
            {"channels", {"uniform_force", "uniform_field", "static_gradient", "transport_phase"}},
            {"trials", 100},
            {"scale", 1.0},
            {"axis_one_dim", {1.0, 0.0}},
            {"axis_two_dim", {1.0, 1.0}}};
  }
  if (command == "thermal") {
    return {{"statistics", "boson"}, {"p0", {0.9, 0.7}}, {"n", 10}, {"levels", 3}, {"engine", true}};
  }
  if (command == "zeeman-scan") {
    return {{"n", 10}, {"rho_min", 1.0}, {"rho_max", 4.0}, {"points", 61}, {"omega_R", 1.0}};
  }
  if (command == "rotor-spectrum") {
    return {{"trap", trap_defaults()}, {"statistics", "fermion"}, {"a_min", -4e-4}, {"a_max", 4e-4},
            {"points", 401},           {"levels", 8},             {"N", 0},         {"gamma", true}};
  }
  if (command == "rotor-ramp") {
    json p = ramp_defaults();
    p["trap"] = trap_defaults();
    p["statistics"] = "fermion";
    p["method"] = "both";
    p["dt"] = 1e-8;
    p["k"] = 24;
    p["eigen_grid"] = 2001;
    p["samples"] = 401;
    p["superselection_check"] = true;
    return p;
  }
  if (command == "phases") {
    json p = ramp_defaults();
    p["trap"] = trap_defaults();
    p["B_tesla"] = 4e-4;
    p["r0"] = 2.5e-6;
    p["A_prime"] = 8e8;
    p["forward_backward"] = true;
    p["intervals"] = 200000;
    return p;
  }
  throw ConfigInvalid("unknown command '" + command + "'");
}

std::string type_name(const json& v) {
  if (v.is_number_integer()) return "integer";
  if (v.is_number()) return "number";
  return v.type_name();
}

bool same_kind(const json& def, const json& user) {
  if (def.is_number_integer()) return user.is_number_integer();
  if (def.is_number()) return user.is_number();
  return def.type() == user.type();
}

// Merges `user` into `base` (a copy of the defaults), collecting differences.
void merge(json& base, const json& user, const std::string& where, std::vector<std::string>& diff) {
  for (auto it = user.begin(); it != user.end(); ++it) {
    const std::string key = where.empty() ? it.key() : where + "." + it.key();
    if (!base.contains(it.key())) {
      std::string allowed;
      for (auto b = base.begin(); b != base.end(); ++b) allowed += (allowed.empty() ? "" : ", ") + b.key();
      diff.push_back("+ " + key + ": unknown key (allowed: " + allowed + ")");
      continue;
    }
    json& slot = base[it.key()];
    if (slot.is_object()) {
      if (!it->is_object()) {
        diff.push_back("~ " + key + ": expected object, got " + type_name(*it));
      } else {
        merge(slot, *it, key, diff);
      }
      continue;
    }
    if (slot.is_array()) {
      if (!it->is_array()) {
        diff.push_back("~ " + key + ": expected array, got " + type_name(*it));
        continue;
      }
      bool ok = true;
      for (const auto& e : *it) {
        if (!same_kind(slot.front(), e)) {
          diff.push_back("~ " + key + "[]: expected " + type_name(slot.front()) + ", got " + type_name(e));
          ok = false;
          break;
        }
      }
      if (ok) slot = *it;
      continue;
    }
    if (!same_kind(slot, *it)) {
      diff.push_back("~ " + key + ": expected " + type_name(slot) + ", got " + type_name(*it));
      continue;
    }
    slot = *it;
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Csv {
 public:
  explicit Csv(const std::vector<std::string>& header) {
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
  }
  template <class... Ts>
  void row(const Ts&... cells) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cell(cells), first = false), ...);
    out_ << '\n';
  }
  [[nodiscard]] std::string str() const { return out_.str(); }

 private:
  static std::string cell(double v) { return fmt(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(std::size_t v) { return std::to_string(v); }
  static std::string cell(const std::string& v) { return v; }
  static std::string cell(const char* v) { return v; }
  std::ostringstream out_;
};

class Artifacts {
 public:
  explicit Artifacts(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }
  void write(const std::string& name, const std::string& content) {
    write_atomic(dir_ / name, content);
    written_.push_back(dir_ / name);
  }
  void write_json(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }
  [[nodiscard]] const std::vector<fs::path>& written() const { return written_; }
  [[nodiscard]] const fs::path& dir() const { return dir_; }

 private:
  fs::path dir_;
  std::vector<fs::path> written_;
};

fock::Statistics statistics_from(const json& p) {
  const auto s = p.at("statistics").get<std::string>();
  if (s == "boson") return fock::Statistics::boson();
  if (s == "fermion") return fock::Statistics::fermion();
  throw ConfigInvalid("statistics must be 'boson' or 'fermion', got '" + s + "'");
}

ramsey::Variant variant_from(const std::string& s) {
  if (s == "one_dim") return ramsey::Variant::one_dim;
  if (s == "two_dim") return ramsey::Variant::two_dim;
  throw ConfigInvalid("variant must be 'one_dim' or 'two_dim', got '" + s + "'");
}

ramsey::InnerLayout layout_from(const std::string& s) {
  if (s == "crossed") return ramsey::InnerLayout::crossed;
  if (s == "uncrossed") return ramsey::InnerLayout::uncrossed;
  throw ConfigInvalid("layout must be 'crossed' or 'uncrossed', got '" + s + "'");
}

ramsey::PulseStage stage_from(const std::string& s) {
  for (auto st : {ramsey::PulseStage::first_half_pi, ramsey::PulseStage::middle_pi, ramsey::PulseStage::last_half_pi})
    if (s == ramsey::to_string(st)) return st;
  throw ConfigInvalid("unknown pulse stage '" + s + "'");
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigInvalid(what);
}

rotor::TrapConfig trap_from(const json& t) {
  rotor::TrapConfig cfg;
  cfg.Omega_rf = 2 * pi * t.at("Omega_rf_hz").get<double>();
  cfg.q = t.at("q").get<double>();
  cfg.a_z = rotor::TrapConfig::a_z_for(2 * pi * t.at("omega_z_hz").get<double>(), cfg.Omega_rf);
  cfg.mass = t.at("mass_u").get<double>() * constants::atomic_mass_unit;
  require(cfg.q >= 0 && cfg.q < 0.5, "trap.q must lie in [0, 0.5)");
  require(cfg.mass > 0, "trap.mass_u must be positive");
  (void)rotor::trap_frequencies(cfg);
  return cfg;
}

struct RampSetup {
  rotor::RotorModel model;
  rotor::GammaSamples gamma;
  rotor::RampSchedule schedule;
  int N;
};

RampSetup ramp_from(const json& p, int threads) {
  const double a0 = p.at("a_start").get<double>();
  const double a1 = p.at("a_end").get<double>();
  const double T = p.at("T").get<double>();
  const int N = p.at("N").get<int>();
  const int points = p.at("gamma_points").get<int>();
  require(a0 != a1, "a_start and a_end must differ");
  require(T > 0, "T must be positive");
  require(N >= 16, "N must be at least 16");
  require(points >= 200, "gamma_points must be at least 200");
  rotor::RotorModel model(trap_from(p.at("trap")));
  auto tc = model.trap();
  tc.a = std::max(std::abs(a0), std::abs(a1));
  (void)rotor::trap_frequencies(tc);
  const auto h = rotor::linear_hamiltonian(model, rotor::AngularBasis(rotor::Sector::fermion_odd, N));
  auto gamma = rotor::sample_gamma(h, a0, a1, points, 24, threads);
  auto schedule = rotor::build_ramp(a0, a1, T, gamma);
  return {model, std::move(gamma), std::move(schedule), N};
}

// ---- commands ---------------------------------------------------------------

json run_fringe(const json& p, Artifacts& art) {
  const auto stats = statistics_from(p);
  const int n = p.at("n").get<int>();
  const int points = p.at("points").get<int>();
  require(points >= 3, "points must be at least 3");
  const auto plan = ramsey::build_sequence(n, variant_from(p.at("variant").get<std::string>()), {},
                                           layout_from(p.at("layout").get<std::string>()));
  const auto scan = ramsey::fringe_scan(plan, stats, ramsey::ideal_pulse_bank, ramsey::uniform_grid(points),
                                        stage_from(p.at("scanned_stage").get<std::string>()));
  Csv csv({"scan_value", "control_phase", "parity", "postselect_prob"});
  for (const auto& s : scan.samples) csv.row(s.scan_value, s.control_phase, s.parity, s.postselect_prob);
  art.write("fringe.csv", csv.str());
  json fit = {{"phase", scan.fit.phase},       {"visibility", scan.fit.visibility},
              {"offset", scan.fit.offset},     {"scan_phase", scan.fit.scan_phase},
              {"residual", scan.fit.residual}, {"exchange_phase", stats.exchange_phase()}};
  art.write_json("fit.json", fit);
  return fit;
}

json run_dephase(const json& p, Artifacts& art, std::uint64_t seed, int threads) {
  const auto stats = statistics_from(p);
  const int n = p.at("n").get<int>();
  const int trials = p.at("trials").get<int>();
  require(trials >= 1, "trials must be positive");
  auto axis_of = [&](const char* key) {
    const auto v = p.at(key).get<std::vector<double>>();
    require(v.size() == 2, std::string(key) + " must have two entries");
    return Eigen::Vector2d(v[0], v[1]);
  };
  Csv summary({"variant", "channel", "trials", "max_deviation", "nominal_phase"});
  Csv detail({"variant", "channel", "trial", "deviation"});
  json result = json::array();
  for (const auto& vname : p.at("variants")) {
    const auto variant = variant_from(vname.get<std::string>());
    const auto plan = ramsey::build_sequence(n, variant, {});
    const auto axis = axis_of(variant == ramsey::Variant::one_dim ? "axis_one_dim" : "axis_two_dim");
    for (const auto& cname : p.at("channels")) {
      ramsey::NoiseModel model{ramsey::noise_channel_from_string(cname.get<std::string>()),
                               p.at("scale").get<double>(), axis};
      const auto rep = ramsey::dephasing_audit(plan, stats, model, trials, seed, threads);
      summary.row(ramsey::to_string(variant), ramsey::to_string(model.channel), trials, rep.max_deviation,
                  rep.nominal_phase);
      for (std::size_t i = 0; i < rep.deviations.size(); ++i)
        detail.row(ramsey::to_string(variant), ramsey::to_string(model.channel), i, rep.deviations[i]);
      result.push_back({{"variant", ramsey::to_string(variant)},
                        {"channel", ramsey::to_string(model.channel)},
                        {"max_deviation", rep.max_deviation}});
    }
  }
  art.write("dephase.csv", summary.str());
  art.write("dephase_trials.csv", detail.str());
  return result;
}

json run_thermal(const json& p, Artifacts& art) {
  const auto stats = statistics_from(p);
  const bool engine = p.at("engine").get<bool>();
  const int n = p.at("n").get<int>();
  const int levels = p.at("levels").get<int>();
  Csv csv({"p0", "p0_axis", "visibility_closed_form", "engine_visibility", "truncated_closed_form",
           "truncation_weight"});
  json result = json::array();
  for (const auto& v : p.at("p0")) {
    const double p0 = v.get<double>();
    require(p0 > 0 && p0 <= 1, "p0 entries must lie in (0, 1]");
    const auto occ = ramsey::ThermalOccupation::isotropic(std::cbrt(p0));
    const auto closed = ramsey::thermal_visibility(occ);
    double ev = std::nan("");
    double tc = std::nan("");
    double tw = std::nan("");
    if (engine) {
      const auto r = ramsey::thermal_fringe(occ, stats, n, levels);
      ev = r.fit.visibility;
      tc = r.truncated_closed_form;
      tw = r.truncation_weight;
    }
    csv.row(p0, occ.p0x, closed.visibility, ev, tc, tw);
    json row = {{"p0", p0}, {"visibility", closed.visibility}};
    if (engine) row["engine_visibility"] = ev;
    result.push_back(row);
  }
  art.write("thermal.csv", csv.str());
  return result;
}

json run_zeeman(const json& p, Artifacts& art, int threads) {
  const int n = p.at("n").get<int>();
  const double lo = p.at("rho_min").get<double>();
  const double hi = p.at("rho_max").get<double>();
  const int points = p.at("points").get<int>();
  require(lo > 0 && hi >= lo, "need 0 < rho_min <= rho_max");
  require(points >= 1, "points must be positive");
  const auto rows = zeeman::zeeman_scan(n, rotor::linspace(lo, hi, points), p.at("omega_R").get<double>(), threads);
  Csv csv({"rho", "p_err", "residual_phase", "closed_form", "discarded"});
  json minima = json::array();
  for (const auto& r : rows) csv.row(r.rho, r.p_err, r.residual_phase, r.closed_form, r.discarded);
  for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
    if (rows[i].p_err < rows[i - 1].p_err && rows[i].p_err <= rows[i + 1].p_err)
      minima.push_back({{"rho", rows[i].rho}, {"p_err", rows[i].p_err}});
  }
  art.write("zeeman_scan.csv", csv.str());
  return {{"local_minima", minima}};
}

json run_rotor_spectrum(const json& p, Artifacts& art, int threads) {
  const auto stats = statistics_from(p);
  const double lo = p.at("a_min").get<double>();
  const double hi = p.at("a_max").get<double>();
  const int points = p.at("points").get<int>();
  const int levels = p.at("levels").get<int>();
  require(points >= 2 && levels >= 2, "points and levels must be at least 2");
  rotor::RotorModel model(trap_from(p.at("trap")));
  const auto sector = rotor::dynamics_sector(stats);
  int N = p.at("N").get<int>();
  double convergence = std::nan("");
  if (N == 0) {
    const auto t = rotor::converge_truncation(model, sector, {lo, 0.5 * (lo + hi), hi}, 8, 1e-10, 128);
    N = t.N;
    convergence = t.relative_change;
  }
  require(N >= levels, "N must be at least levels");
  const auto grid = rotor::linspace(lo, hi, points);
  const auto h = rotor::linear_hamiltonian(model, rotor::AngularBasis(sector, N));
  const auto hp = rotor::linear_hamiltonian(model, rotor::AngularBasis(rotor::partner_sector(stats), N));
  const auto rows = rotor::sweep_spectrum(h, grid, levels, threads);
  std::vector<double> partner(grid.size());
  std::vector<double> gamma(grid.size(), std::nan(""));
  const bool with_gamma = p.at("gamma").get<bool>();
  util::parallel_for(grid.size(), threads, [&](std::size_t i) {
    partner[i] = rotor::spectrum(hp.at(grid[i]), 1).values(0) - rotor::spectrum(h.at(grid[i]), 1).values(0);
    if (with_gamma) gamma[i] = rotor::adiabaticity_perturbative(h, grid[i]);
  });
  std::vector<std::string> header{"a", "gamma", "partner_E0_minus_E0_hz"};
  for (int k = 1; k < levels; ++k) header.push_back("E" + std::to_string(k) + "_minus_E0_hz");
  Csv csv(header);
  std::string text = csv.str();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    text += fmt(grid[i]) + "," + fmt(gamma[i]) + "," + fmt(partner[i] / (2 * pi));
    for (int k = 0; k + 1 < levels; ++k) text += "," + fmt(rows[i].excitations(k) / (2 * pi));
    text += "\n";
  }
  art.write("spectrum.csv", text);

  const auto gap = rotor::minimum_gap(rows);
  const auto f = rotor::trap_frequencies(model.trap());
  const double dcrit = rotor::critical_splitting(model.trap().q, f.omega_perp);
  json summary = {{"N", N},
                  {"truncation_relative_change", convergence},
                  {"omega_perp_hz", f.omega_perp / (2 * pi)},
                  {"two_r0_m", 2 * model.r0()},
                  {"critical_splitting_hz", dcrit / (2 * pi)},
                  {"a_critical", model.a_critical()},
                  {"min_gap_hz", gap.min_gap / (2 * pi)},
                  {"a_at_min_gap", gap.a_at_min}};
  art.write_json("spectrum_summary.json", summary);
  return summary;
}

json run_rotor_ramp(const json& p, Artifacts& art, int threads) {
  const auto stats = statistics_from(p);
  const auto setup = ramp_from(p, threads);
  const std::string method = p.at("method").get<std::string>();
  require(method == "both" || method == "full_banded" || method == "eigenframe",
          "method must be 'full_banded', 'eigenframe' or 'both'");
  rotor::PropagationOptions opt;
  opt.dt = p.at("dt").get<double>();
  opt.k = p.at("k").get<int>();
  opt.eigen_grid = p.at("eigen_grid").get<int>();
  opt.samples = p.at("samples").get<int>();
  opt.threads = threads;
  require(opt.dt > 0, "dt must be positive");
  require(opt.k >= 16, "k must be at least 16");
  opt.method = method == "eigenframe" ? rotor::Method::eigenframe : rotor::Method::full_banded;

  Csv sched({"t", "a"});
  for (std::size_t i = 0; i < setup.schedule.times().size(); ++i)
    sched.row(setup.schedule.times()[i], setup.schedule.values()[i]);
  art.write("schedule.csv", sched.str());
  Csv gam({"a", "gamma"});
  for (std::size_t i = 0; i < setup.gamma.a.size(); ++i) gam.row(setup.gamma.a[i], setup.gamma.gamma[i]);
  art.write("gamma.csv", gam.str());

  const auto pt = rotor::parity_transfer(setup.model, stats, setup.schedule, setup.N, opt,
                                         p.at("superselection_check").get<bool>());
  auto write_traj = [&](const std::string& name, const rotor::Trajectory& tr) {
    Csv csv({"t", "a", "overlap2", "excited_overlap2", "norm"});
    for (const auto& q : tr.points) csv.row(q.t, q.a, q.ground_overlap2, q.excited_overlap2, q.norm);
    art.write(name, csv.str());
  };
  write_traj(method == "eigenframe" ? "trajectory_eigenframe.csv" : "trajectory.csv", pt.trajectory);

  json summary = {{"statistics", fock::to_string(stats)},
                  {"N", setup.N},
                  {"method", method},
                  {"min_ground_overlap2", pt.min_ground_overlap2},
                  {"final_ground_population", pt.trajectory.final_ground_population},
                  {"p_n0_like", pt.p_n0_like},
                  {"p_n1_like", pt.p_n1_like},
                  {"final_reflection_parity", pt.final_parity},
                  {"forbidden_population", pt.forbidden_population},
                  {"max_norm_drift", pt.trajectory.max_norm_drift}};
  if (method == "both") {
    const rotor::AngularBasis basis(rotor::dynamics_sector(stats), setup.N);
    const auto h = rotor::linear_hamiltonian(setup.model, basis);
    auto o = opt;
    o.method = rotor::Method::eigenframe;
    const auto ef = rotor::propagate(h, setup.schedule, rotor::ground_state(h, setup.schedule.a_start()), o);
    write_traj("trajectory_eigenframe.csv", ef);
    const double diff = std::abs(ef.final_ground_population - pt.trajectory.final_ground_population);
    summary["eigenframe_final_ground_population"] = ef.final_ground_population;
    summary["eigenframe_min_ground_overlap2"] = ef.min_ground_overlap2;
    summary["method_difference"] = diff;
    if (diff > 1e-2) throw MethodDisagreement("backends disagree by " + fmt(diff));
  }
  art.write_json("ramp_summary.json", summary);
  return summary;
}

json run_phases(const json& p, Artifacts& art, int threads) {
  const double B = p.at("B_tesla").get<double>();
  const double r0 = p.at("r0").get<double>();
  require(B >= 0 && r0 > 0, "B_tesla must be non-negative and r0 positive");
  const double ab = rotor::aharonov_bohm_phase(B, r0);
  const auto setup = ramp_from(p, threads);
  const double Ap = p.at("A_prime").get<double>();
  const int intervals = p.at("intervals").get<int>();
  const auto s = rotor::stray_phase(setup.model, Ap, setup.schedule, intervals);
  json out = {{"phi_AB", ab},
              {"phi_AB_over_2pi", ab / (2 * pi)},
              {"phi_s", s.phase},
              {"phi_s_over_pi", s.phase / pi}};
  if (p.at("forward_backward").get<bool>()) {
    const auto round_trip = rotor::concatenate(setup.schedule, rotor::reversed(setup.schedule));
    const auto fb = rotor::stray_phase(setup.model, Ap, round_trip, 2 * intervals);
    out["phi_forward_backward"] = fb.phase;
    out["round_trip_mismatch_mod_2pi"] = std::abs(ramsey::wrap_to_pi(fb.phase - 2 * s.phase));
  }
  Csv csv({"t", "a", "theta_min"});
  const std::size_t stride = std::max<std::size_t>(1, s.t.size() / 2000);
  for (std::size_t i = 0; i < s.t.size(); i += stride) csv.row(s.t[i], setup.schedule.a_at(s.t[i]), s.theta_min[i]);
  art.write("theta_min.csv", csv.str());
  art.write_json("phases.json", out);
  return out;
}

std::string lapack_version() {
  int a = 0, b = 0, c = 0;
  ilaver_(&a, &b, &c);
  return std::to_string(a) + "." + std::to_string(b) + "." + std::to_string(c);
}

json versions() {
  return {{"exchlab", EXCHLAB_VERSION},
          {"compiler", __VERSION__},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)},
          {"boost", BOOST_LIB_VERSION},
          {"lapack", lapack_version()},
          {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> list{"fringe",         "dephase",    "thermal", "zeeman-scan",
                                             "rotor-spectrum", "rotor-ramp", "phases"};
  return list;
}

json default_config(const std::string& command) {
  return {{"command", command}, {"seed", 1}, {"params", params_defaults(command)}};
}

json resolve_config(const std::string& command, const json& user) {
  json cfg = default_config(command);
  if (!user.is_object()) throw ConfigInvalid("config must be a JSON object");
  std::vector<std::string> diff;
  if (user.contains("command") && user["command"] != command) {
    diff.push_back("~ command: config is for '" + user["command"].dump() + "', running '" + command + "'");
  }
  json rest = user;
  rest.erase("command");
  merge(cfg, rest, "", diff);
  if (!diff.empty()) {
    std::string msg = "config does not match the schema for '" + command + "':";
    for (const auto& d : diff) msg += "\n  " + d;
    throw ConfigInvalid(msg);
  }
  return cfg;
}

void write_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
    f << content;
    f.flush();
    if (!f) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

RunSummary run(const std::string& command, const json& config, const RunOptions& options) {
  json cfg = resolve_config(command, config);
  if (options.seed) cfg["seed"] = *options.seed;
  const auto seed = cfg.at("seed").get<std::uint64_t>();
  const int threads = std::max(1, options.threads);
  const json& p = cfg.at("params");
  Artifacts art(options.out);

  const auto start = std::chrono::steady_clock::now();
  json result;
  if (command == "fringe") result = run_fringe(p, art);
  else if (command == "dephase") result = run_dephase(p, art, seed, threads);
  else if (command == "thermal") result = run_thermal(p, art);
  else if (command == "zeeman-scan") result = run_zeeman(p, art, threads);
  else if (command == "rotor-spectrum") result = run_rotor_spectrum(p, art, threads);
  else if (command == "rotor-ramp") result = run_rotor_ramp(p, art, threads);
  else if (command == "phases") result = run_phases(p, art, threads);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json outputs = json::array();
  for (const auto& f : art.written()) outputs.push_back(f.filename().string());
  json manifest = {{"command", command}, {"config", cfg},     {"threads", threads}, {"versions", versions()},
                   {"wall_time_s", wall}, {"outputs", outputs}, {"result", result}};
  art.write_json("manifest.json", manifest);
  return {manifest, art.written()};
}

int main_entry(int argc, char** argv) {
  CLI::App app{"exchlab scenario runner"};
  std::string command;
  std::string config_path;
  std::string out = "out";
  std::uint64_t seed = 0;
  int threads = 1;
  bool print_defaults = false;
  app.add_option("command", command, "scenario to run")->required()->check(CLI::IsMember(commands()));
  auto* cfg_opt = app.add_option("--config", config_path, "JSON config file");
  app.add_option("--out", out, "output directory");
  auto* seed_opt = app.add_option("--seed", seed, "random seed (overrides the config)");
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--print-defaults", print_defaults, "print the default config and exit");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (print_defaults) {
    std::cout << default_config(command).dump(2) << "\n";
    return 0;
  }
  try {
    json user = json::object();
    if (*cfg_opt) {
      std::ifstream f(config_path);
      if (!f) throw ConfigInvalid("cannot open config '" + config_path + "'");
      try {
        user = json::parse(f);
      } catch (const json::parse_error& e) {
        throw ConfigInvalid(std::string("config is not valid JSON: ") + e.what());
      }
      // a manifest from an earlier run is accepted as a config
      if (user.contains("config") && user.contains("versions")) user = user["config"];
    }
    RunOptions opt;
    opt.out = out;
    if (*seed_opt) opt.seed = seed;
    opt.threads = threads;
    const auto summary = run(command, user, opt);
    std::cout << summary.manifest.at("result").dump(2) << "\n";
    return 0;
  } catch (const Error& e) {
    std::cerr << e.name() << ": " << e.what() << "\n";
    return e.numerical() ? 3 : 2;
  } catch (const json::exception& e) {
    std::cerr << "ConfigInvalid: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "ConfigInvalid: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace exchlab::cli

// Acceptance checks: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "qls/report.hpp"

using namespace qls;

namespace {

RunConfig scenario(const std::string& name) {
  return load_config_file(std::string(QLS_SCENARIO_DIR) + "/" + name + ".json");
}

struct Outcome {
  bool pass;
  std::string detail;
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

bool within(double value, double target, double rel) {
  return std::abs(value - target) <= rel * std::abs(target);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double summary_number(const Table& t, const std::string& key) {
  for (const auto& [k, v] : t.summary)
    if (k == key) return std::get<double>(v);
  return std::nan("");
}

Outcome check_exchange_time() {
  const auto b = make_budget(scenario("paper-electron"));
  return {within(b.t_ex, 0.160, 0.05), "t_ex = " + num(b.t_ex) + " s (target 0.160 +-5%)"};
}

Outcome check_qls_figure() {
  const auto b = make_budget(scenario("paper-electron"));
  return {within(b.figure, 0.098, 0.05), "t_ex n_bar Gamma = " + num(b.figure) + " (target 0.098 +-5%)"};
}

Outcome check_thermal_occupation() {
  const double n = thermal_occupation(hz_to_angular(200e6), 0.010);
  return {std::abs(n - 0.62) <= 0.02, "n_bar = " + num(n) + " (target 0.62 +-0.02)"};
}

Outcome check_resonator_q() {
  const auto b = make_budget(scenario("paper-electron"));
  const double q = b.resonator.quality_factor();
  return {within(q, 6000.0, 0.10), "Q = " + num(q) + " (target 6000 +-10%)"};
}

Outcome check_bottle_shift() {
  const double wz = hz_to_angular(200e6);
  const auto e = electron();
  const double d = bottle_delta(9000.0, wz, e.mass, e.charge);
  const double ratio = bottle_delta(30.0 * 9000.0, wz, e.mass, e.charge) / d;
  const double hz = angular_to_hz(d);
  return {within(hz, 23.0, 0.05) && ratio == 30.0,
          "delta = " + num(hz) + " Hz (target 23 +-5%), ratio(30 B2) = " + num(ratio)};
}

Outcome check_relativistic_shift() {
  const double wz = hz_to_angular(200e6);
  const double d = relativistic_delta(cyclotron_frequency(6.0, electron()), wz, constants::m_e);
  const double hz = angular_to_hz(d);
  const double frac = std::abs(d) / wz;
  return {within(hz, -0.14, 0.05) && frac >= 0.5e-9 && frac <= 2e-9,
          "delta_rel = " + num(hz) + " Hz (target -0.14 +-5%), |delta_rel|/omega_z = " + num(frac)};
}

Outcome check_field_profile() {
  const auto cfg = scenario("paper-electron");
  const auto ring = make_magnet(*cfg.magnet);
  const double b2 = gradients(ring, 0.05).B2;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> z_dist(-0.06, 0.06);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double z = z_dist(rng);
    const auto a = gradients(ring, z);
    const auto fd = finite_difference_gradients(ring, z);
    worst = std::max({worst, std::abs(fd.B1 - a.B1) / std::abs(a.B1),
                      std::abs(fd.B2 - a.B2) / std::abs(a.B2)});
  }
  return {b2 >= 2.0 && b2 <= 8.0 && worst <= 1e-6,
          "B2(5 cm) = " + num(b2) + " T/m^2 (range [2, 8]), worst FD rel. error " + num(worst) +
              " over 20 points (limit 1e-6)"};
}

Outcome check_heating() {
  const auto e = electron();
  const double g = heating_rate(HeatingModel{}, hz_to_angular(200e6), 1e-3, 0.010, e.mass, e.charge);
  return {g < 1.0, "Gamma_h = " + num(g) + " quanta/s (limit < 1)"};
}

Outcome check_dynamics_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto params = ExchangeParams::from_budget(make_budget(scenario("paper-electron")));
  const double rk4 = swap_fidelity(params, 4, Propagator::integrator);
  const double exact = swap_fidelity(params, 4, Propagator::exact);
  const double ideal = swap_fidelity(ExchangeParams{params.omega_ex, 0, 0, 0, 0});

  const double t = std::numbers::pi / (2.0 * params.omega_ex);
  const auto damped = evolve(TwoModeState::fock(4, 1, 0), params, t);
  const double trace_err = std::abs(damped.trace() - 1.0);

  // Lossless, detuned: total quanta from a superposition-like mixed start.
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(25, 25);
  const TwoModeState probe(4);
  rho(probe.index(2, 0), probe.index(2, 0)) = 0.5;
  rho(probe.index(1, 1), probe.index(1, 1)) = 0.3;
  rho(probe.index(0, 1), probe.index(0, 1)) = 0.2;
  rho(probe.index(2, 0), probe.index(1, 1)) = 0.2;
  rho(probe.index(1, 1), probe.index(2, 0)) = 0.2;
  const auto start = TwoModeState::from_density_matrix(4, rho);
  const auto lossless = evolve(start, ExchangeParams{params.omega_ex, 0, 0, 0, 3.0}, 0.4);
  const double quanta_err = std::abs(lossless.mean_quanta_S() + lossless.mean_quanta_L() -
                                     start.mean_quanta_S() - start.mean_quanta_L());
  const double runtime = seconds_since(t0);

  // Steady state of one damped mode; the cutoff is raised so truncation
  // does not bias the mean.
  EvolveOptions coarse;
  coarse.step_fraction = 0.05;
  const auto thermal =
      evolve(TwoModeState::fock(10, 0, 0), ExchangeParams{0, 1.0, 0, 0.62, 0}, 20.0, coarse);
  const double n_rel = std::abs(thermal.mean_quanta_L() - 0.62) / 0.62;

  const bool pass = std::abs(rk4 - exact) <= 1e-8 && std::abs(ideal - 1.0) <= 1e-6 &&
                    trace_err <= 1e-9 && quanta_err <= 1e-8 && n_rel <= 0.01 && runtime < 10.0;
  return {pass, "|rk4-exact| = " + num(std::abs(rk4 - exact)) + ", ideal = " + num(ideal) +
                    ", trace err " + num(trace_err) + ", quanta err " + num(quanta_err) +
                    ", steady <n> rel err " + num(n_rel) + ", n_max=4 runtime " + num(runtime) +
                    " s, swap fidelity " + num(exact)};
}

Outcome check_protocol_monte_carlo() {
  const auto t0 = std::chrono::steady_clock::now();
  auto cfg = scenario("paper-electron");
  auto pc = make_protocol(cfg);
  pc.cycles = 10000;
  pc.field_noise = 0.0;
  pc.detection.noise_density = two_pi * 2.0;
  const double w = pc.excitation().width();
  pc.drive.detuning_grid = {-w, 0.0, 0.5 * w, w, 3.0 * w};
  const auto ls = lineshape_scan(pc);
  double worst_sigmas = 0.0;
  for (std::size_t i = 0; i < ls.detuning.size(); ++i) {
    const double p = stage_probabilities(pc, ls.detuning[i]).jump;
    const double n = static_cast<double>(pc.cycles);
    const double sigma = std::sqrt(std::max(p * (1 - p), 1.0 / n) / n);
    worst_sigmas = std::max(worst_sigmas, std::abs(ls.fraction[i] - p) / sigma);
  }

  cfg.seed = 4242;
  std::ostringstream a, b;
  write_csv(a, cmd_lineshape(cfg));
  write_csv(b, cmd_lineshape(cfg));
  const bool identical = a.str() == b.str();
  const double runtime = seconds_since(t0);
  return {worst_sigmas <= 3.0 && identical && runtime < 60.0,
          "worst deviation " + num(worst_sigmas) + " sigma at 1e4 cycles/point, same-seed CSV " +
              (identical ? "identical" : "DIFFERENT") + ", runtime " + num(runtime) + " s"};
}

Outcome check_linewidth_scaling() {
  const double w4 = summary_number(cmd_lineshape(scenario("linewidth-b2-4")), "fitted_width_Hz");
  const double w300 = summary_number(cmd_lineshape(scenario("linewidth-b2-300")), "fitted_width_Hz");
  const double ratio = w300 / w4;
  return {within(ratio, 75.0, 0.10), "width(300)/width(4) = " + num(ratio) + " (target 75 +-10%)"};
}

Outcome check_proton_preset() {
  const auto cfg = scenario("paper-proton");
  const auto b = make_budget(cfg);
  const auto t = cmd_budget(cfg);
  auto e_cfg = cfg;
  e_cfg.species = "electron";
  const double ratio = b.logic.l / make_budget(e_cfg).logic.l;
  const double exact = constants::m_p / constants::m_e;
  const bool pass = b.n_bar >= 100.0 && !b.feasible && !t.warnings.empty() &&
                    std::abs(ratio - exact) <= 1e-9 * exact;
  return {pass, "n_bar = " + num(b.n_bar) + ", feasible = " + (b.feasible ? "yes" : "no") +
                    ", l_p/l_e = " + num(ratio) + " (m_p/m_e = " + num(exact) + ")"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"exchange time", check_exchange_time},
      {"QLS figure", check_qls_figure},
      {"thermal occupation", check_thermal_occupation},
      {"resonator Q", check_resonator_q},
      {"bottle shift", check_bottle_shift},
      {"relativistic bottle", check_relativistic_shift},
      {"field profile", check_field_profile},
      {"heating", check_heating},
      {"dynamics oracle equivalence", check_dynamics_equivalence},
      {"protocol Monte Carlo", check_protocol_monte_carlo},
      {"linewidth scaling", check_linewidth_scaling},
      {"proton preset", check_proton_preset},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("[%s] %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}

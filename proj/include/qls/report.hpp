#pragma once

// Command implementations behind the CLI. Each command turns a RunConfig
// into a Table; writers render tables as CSV or as JSON records.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "qls/config.hpp"
#include "qls/finite_difference.hpp"

namespace qls {

using Cell = std::variant<double, std::int64_t, bool, std::string>;

struct Table {
  std::vector<std::string> columns;  // names carry units, e.g. "t_ex_s"
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, Cell>> summary;
  std::vector<std::string> warnings;

  void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

/// Shortest round-trip representation; identical inputs give identical bytes.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string format_cell(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>)
          return format_number(v);
        else if constexpr (std::is_same_v<T, bool>)
          return v ? "1" : "0";
        else if constexpr (std::is_same_v<T, std::int64_t>)
          return std::to_string(v);
        else
          return v;
      },
      c);
}

inline Json cell_json(const Cell& c) {
  return std::visit([](const auto& v) { return Json(v); }, c);
}

/// CSV with a header row; summary entries follow as "# key,value" lines.
inline void write_csv(std::ostream& out, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_cell(row[i]);
    out << '\n';
  }
  for (const auto& [key, value] : t.summary) out << "# " << key << ',' << format_cell(value) << '\n';
}

/// One JSON object per line; the summary, if any, is the last line.
inline void write_records(std::ostream& out, const Table& t) {
  for (const auto& row : t.rows) {
    Json j = Json::object();
    for (std::size_t i = 0; i < row.size(); ++i) j[t.columns[i]] = cell_json(row[i]);
    out << j.dump() << '\n';
  }
  if (!t.summary.empty()) {
    Json s = Json::object();
    for (const auto& [key, value] : t.summary) s[key] = cell_json(value);
    out << Json{{"summary", s}}.dump() << '\n';
  }
}

inline void write_table(std::ostream& out, const Table& t, const std::string& format) {
  if (format == "records")
    write_records(out, t);
  else
    write_csv(out, t);
}

// ---- budget ----------------------------------------------------------------

inline Table cmd_budget(const RunConfig& c) {
  const Particle part = particle(c);
  const auto b = make_budget(c);
  const auto trap_L = make_trap(c, TrapRole::logic);
  const auto trap_S = make_trap(c, TrapRole::spectroscopy);
  const auto s_L = shift_set(trap_L, part);
  const auto s_S = shift_set(trap_S, part);

  Table t;
  t.columns = {"quantity", "value", "unit"};
  auto row = [&t](const std::string& name, Cell v, const std::string& unit) {
    t.add({name, std::move(v), unit});
  };
  row("species", part.name, "");
  row("axial_frequency", angular_to_hz(b.omega_z), "Hz");
  row("resonator_frequency", angular_to_hz(b.resonator.center_frequency()), "Hz");
  row("resonator_linewidth", angular_to_hz(b.resonator.linewidth()), "Hz");
  row("resonator_detuning", b.detune_linewidths, "linewidths");
  row("resonator_inductance", b.resonator.L_p, "H");
  row("quality_factor", b.resonator.quality_factor(), "");
  row("impedance_real", b.z_at_omega_z.real(), "Ohm");
  row("impedance_imag", b.z_at_omega_z.imag(), "Ohm");
  row("capacitance_equivalent", b.c_T, "F");
  row("l_logic", b.logic.l, "H");
  row("l_spectroscopy", b.spectroscopy.l, "H");
  row("c_logic", b.logic.c, "F");
  row("c_spectroscopy", b.spectroscopy.c, "F");
  row("bare_axial_frequency_logic", angular_to_hz(b.logic.omega_z0), "Hz");
  row("bare_axial_frequency_spectroscopy", angular_to_hz(b.spectroscopy.omega_z0), "Hz");
  row("exchange_rate", b.omega_ex, "rad/s");
  row("exchange_time", b.t_ex, "s");
  row("gamma_logic", b.gamma_L, "1/s");
  row("gamma_spectroscopy", b.gamma_S, "1/s");
  row("gamma", b.gamma, "1/s");
  row("temperature", c.budget.temperature_K, "K");
  row("n_bar", b.n_bar, "");
  row("figure", b.figure, "");
  row("threshold", b.threshold, "");
  row("feasible", b.feasible, "");
  row("bottle_shift_logic", angular_to_hz(s_L.delta), "Hz");
  row("bottle_shift_spectroscopy", angular_to_hz(s_S.delta), "Hz");
  row("relativistic_shift_logic", angular_to_hz(s_L.delta_rel), "Hz");
  row("cyclotron_broadening_spectroscopy", angular_to_hz(s_S.broadening), "Hz");
  if (c.heating) {
    const double rate = heating_rate(c.heating->model, b.omega_z, trap_L.d_eff,
                                     c.heating->temperature_K, part.mass, part.charge);
    row("heating_rate_logic", rate, "1/s");
  }
  if (!b.feasible)
    t.warnings.push_back("budget infeasible: figure " + format_number(b.figure) +
                         " exceeds threshold " + format_number(b.threshold) + " (n_bar " +
                         format_number(b.n_bar) + ")");
  return t;
}

// ---- field -----------------------------------------------------------------

/// Analytic and finite-difference gradients agree to `tol` relative, with an
/// absolute floor tied to the ring's own gradient scale (B1 crosses zero).
inline bool gradients_agree(const FieldGradients& a, const FieldGradients& fd,
                            const RingMagnet& ring, double tol = 1e-6) {
  const double len = std::min(ring.r_in, 0.5 * ring.height);
  const double scale = std::abs(ring.polarization());
  auto close = [&](double x, double y, double floor) {
    return std::abs(x - y) <= tol * std::max(std::abs(x), std::abs(y)) + floor;
  };
  return close(a.B1, fd.B1, 1e-12 * scale / len) && close(a.B2, fd.B2, 1e-12 * scale / (len * len));
}

inline Table cmd_field(const RunConfig& c) {
  if (!c.magnet) throw SchemaError("/magnet", "missing required block");
  const MagnetBlock& m = *c.magnet;
  const RingMagnet ring = make_magnet(m);

  auto z = linspace(m.z_start_m, m.z_stop_m, m.points);
  // Snap the nearest sample onto each trap position, or add one if none is close.
  const double snap = 1e-9 * std::abs(m.z_stop_m - m.z_start_m);
  for (double marker : {m.logic_z_m, m.spectroscopy_z_m}) {
    auto it = std::find_if(z.begin(), z.end(),
                           [&](double x) { return std::abs(x - marker) <= snap; });
    if (it != z.end())
      *it = marker;
    else
      z.push_back(marker);
  }
  std::sort(z.begin(), z.end());
  const auto prof = field_profile(ring, m.background_T, z);

  Table t;
  t.columns = {"z_m",           "B_T",           "B1_T_per_m",  "B2_T_per_m2",
               "B1_fd_T_per_m", "B2_fd_T_per_m2", "fd_agree",   "marker"};
  for (std::size_t i = 0; i < prof.size(); ++i) {
    const auto fd = finite_difference_gradients(ring, z[i]);
    const bool agree = gradients_agree({prof.B1[i], prof.B2[i]}, fd, ring);
    std::string marker;
    if (z[i] == m.logic_z_m) marker = "logic";
    if (z[i] == m.spectroscopy_z_m) marker += marker.empty() ? "spectroscopy" : "+spectroscopy";
    t.add({prof.z[i], prof.B[i], prof.B1[i], prof.B2[i], fd.B1, fd.B2, agree, marker});
  }
  t.summary.push_back({"mu0M_T", ring.polarization()});
  t.summary.push_back({"B2_logic_T_per_m2", gradients(ring, m.logic_z_m).B2});
  t.summary.push_back({"B2_spectroscopy_T_per_m2", gradients(ring, m.spectroscopy_z_m).B2});
  return t;
}

// ---- lineshape / protocol -----------------------------------------------------

inline void append_protocol_summary(Table& t, const RunConfig& c, const ProtocolConfig& pc,
                                    const LineFit& fit) {
  const auto timing = timing_budget(pc, reference_delta(c));
  t.summary.push_back({"jump_rate", fit.jump_rate});
  t.summary.push_back({"fit_valid", fit.valid});
  t.summary.push_back({"fitted_center_Hz", angular_to_hz(fit.center)});
  t.summary.push_back({"fitted_width_Hz", angular_to_hz(fit.width)});
  t.summary.push_back({"center_error_Hz", angular_to_hz(fit.center_error)});
  t.summary.push_back({"profile_width_Hz", angular_to_hz(pc.excitation().width())});
  t.summary.push_back({"swap_fidelity", pc.swap_fidelity});
  t.summary.push_back({"cycle_time_s", timing.total});
  t.summary.push_back({"throughput_per_s", timing.throughput});
  t.summary.push_back({"exchange_dominates", timing.exchange_dominates});
  t.summary.push_back({"required_averaging_s", timing.required_averaging});
  if (timing.reference_delta != 0.0)
    t.summary.push_back({"detection_speedup", timing.detection_speedup});
}

inline Table cmd_lineshape(const RunConfig& c) {
  const auto pc = make_protocol(c);
  const auto ls = lineshape_scan(pc);
  Table t;
  t.columns = {"detuning_Hz", "fraction", "error", "jumps", "cycles", "expected_fraction"};
  for (std::size_t i = 0; i < ls.detuning.size(); ++i)
    t.add({angular_to_hz(ls.detuning[i]), ls.fraction[i], ls.error[i],
           static_cast<std::int64_t>(ls.jumps[i]), static_cast<std::int64_t>(ls.cycles),
           stage_probabilities(pc, ls.detuning[i]).jump});
  append_protocol_summary(t, c, pc, fit_lineshape(ls));
  return t;
}

inline Table cmd_protocol(const RunConfig& c) {
  const auto pc = make_protocol(c);
  const auto records = protocol_records(pc);
  Table t;
  t.columns = {"point",          "cycle",          "detuning_Hz",  "effective_detuning_Hz",
               "n_c_S",          "transfer_iii",   "exchange_iv",  "transfer_v",
               "measured_shift_Hz", "declared_jump", "elapsed_s", "spectroscopy_axial_shift_Hz"};
  Lineshape ls;
  ls.cycles = pc.cycles;
  ls.detuning = pc.drive.detuning_grid;
  ls.jumps.assign(ls.detuning.size(), 0);
  for (const auto& r : records) {
    t.add({static_cast<std::int64_t>(r.point), static_cast<std::int64_t>(r.cycle),
           angular_to_hz(r.detuning), angular_to_hz(r.effective_detuning),
           static_cast<std::int64_t>(r.n_c_S), r.transfer_iii, r.exchange_iv, r.transfer_v,
           angular_to_hz(r.measured_shift), r.declared_jump, r.elapsed,
           angular_to_hz(r.spectroscopy_axial_shift)});
    ls.jumps[r.point] += r.declared_jump;
  }
  for (std::size_t j : ls.jumps) {
    const double f = static_cast<double>(j) / static_cast<double>(ls.cycles);
    ls.fraction.push_back(f);
    ls.error.push_back(std::sqrt(f * (1.0 - f) / static_cast<double>(ls.cycles)));
  }
  append_protocol_summary(t, c, pc, fit_lineshape(ls));
  return t;
}

// ---- sweep -----------------------------------------------------------------

enum class SweepReport { budget, lineshape };

struct SweepSpec {
  std::string axis;  // dotted path or JSON pointer to a numeric leaf
  double from = 0.0;
  double to = 0.0;
  std::size_t points = 11;
  bool logarithmic = false;
  SweepReport report = SweepReport::budget;
};

inline std::vector<double> sweep_values(const SweepSpec& s) {
  if (s.points < 1) throw DomainError("sweep: need at least one point");
  if (!s.logarithmic) return linspace(s.from, s.to, s.points);
  if (!(s.from > 0.0) || !(s.to > 0.0))
    throw DomainError("sweep: logarithmic range needs positive bounds");
  auto v = linspace(std::log(s.from), std::log(s.to), s.points);
  for (double& x : v) x = std::exp(x);
  return v;
}

inline Table cmd_sweep(const RunConfig& c, const SweepSpec& s) {
  const Json base = dump_config(c);
  const std::string column = axis_pointer(s.axis).to_string();
  // Validates the axis up front so a bad path fails before any evaluation.
  with_axis_value(base, s.axis, 0.0);

  Table t;
  if (s.report == SweepReport::budget)
    t.columns = {column,    "quality_factor", "exchange_rate_rad_per_s", "exchange_time_s",
                 "gamma_per_s", "n_bar",       "figure",                  "feasible"};
  else
    t.columns = {column, "jump_rate", "fitted_center_Hz", "fitted_width_Hz", "center_error_Hz"};

  for (double v : sweep_values(s)) {
    const RunConfig point = load_config(with_axis_value(base, s.axis, v));
    if (s.report == SweepReport::budget) {
      const auto b = make_budget(point);
      t.add({v, b.resonator.quality_factor(), b.omega_ex, b.t_ex, b.gamma, b.n_bar, b.figure,
             b.feasible});
    } else {
      const auto fit = fit_lineshape(lineshape_scan(make_protocol(point)));
      t.add({v, fit.jump_rate, angular_to_hz(fit.center), angular_to_hz(fit.width),
             angular_to_hz(fit.center_error)});
    }
  }
  return t;
}

}  // namespace qls

#pragma once

// Equivalent-circuit model of two trapped particles sharing a parallel LCR
// resonator through a coupling wire.
//
// Each particle's axial motion behaves as a series l-c branch; the resonator
// is a parallel L_p, C_p, R_p tank. Detuning the tank below the axial
// frequency makes it capacitive, which couples the two branches coherently
// (rate from |Im Z|) while Re Z damps them.

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <string_view>

#include "qls/constants.hpp"
#include "qls/error.hpp"

namespace qls {

struct ResonatorParams {
  double L_p;  // [H]
  double C_p;  // [F]
  double R_p;  // [Ohm]

  void validate() const {
    if (!(L_p > 0.0) || !(C_p > 0.0) || !(R_p > 0.0))
      throw DomainError("ResonatorParams: L_p, C_p and R_p must be positive");
  }

  double center_frequency() const { return 1.0 / std::sqrt(L_p * C_p); }
  double linewidth() const { return 1.0 / (C_p * R_p); }
  double quality_factor() const { return R_p * center_frequency() * C_p; }

  /// Resonator with given C_p and R_p whose center sits `detune_linewidths`
  /// widths (1/(C_p R_p)) below `omega_z`. L_p is solved for.
  static ResonatorParams detuned_below(double C_p, double R_p, double omega_z,
                                       double detune_linewidths) {
    if (!(C_p > 0.0) || !(R_p > 0.0))
      throw DomainError("detuned_below: C_p and R_p must be positive");
    if (!(omega_z > 0.0)) throw DomainError("detuned_below: omega_z must be positive");
    if (!(detune_linewidths > 0.0))
      throw DomainError("detuned_below: detuning must be positive (resonator below omega_z)");
    const double omega_res = omega_z - detune_linewidths / (C_p * R_p);
    if (!(omega_res > 0.0))
      throw DomainError("detuned_below: detuning pushes the resonator below zero frequency");
    return {1.0 / (omega_res * omega_res * C_p), C_p, R_p};
  }

  bool operator==(const ResonatorParams&) const = default;
};

enum class TrapRole { logic, spectroscopy };

inline std::string_view to_string(TrapRole r) {
  return r == TrapRole::logic ? "logic" : "spectroscopy";
}

struct TrapParams {
  double d_eff;     // effective trap size incl. image-charge factor [m]
  double omega_z;   // resonator-shifted (operating) axial frequency [rad/s]
  double B;         // axial field [T]
  double B2_local;  // quadratic gradient at the trap [T/m^2]
  double T_axial;   // axial temperature [K]
  TrapRole role;

  void validate() const {
    if (!(d_eff > 0.0)) throw DomainError("TrapParams: d_eff must be positive");
    if (!(omega_z > 0.0)) throw DomainError("TrapParams: omega_z must be positive");
    if (!(T_axial >= 0.0)) throw DomainError("TrapParams: T_axial must be non-negative");
  }

  bool operator==(const TrapParams&) const = default;
};

/// Series l-c equivalent of one particle's axial motion.
struct SeriesModeEquivalent {
  double l;         // [H]
  double c;         // [F]
  double omega_z0;  // bare axial frequency, before resonator pulling [rad/s]
};

struct ExchangeBudget {
  ResonatorParams resonator;
  double omega_z = 0.0;
  double detune_linewidths = 0.0;
  std::complex<double> z_at_omega_z;
  double c_T = 0.0;  // capacitive replacement 1/(omega_z |Im Z|) [F]
  SeriesModeEquivalent logic{};
  SeriesModeEquivalent spectroscopy{};
  double omega_ex = 0.0;  // [rad/s]
  double t_ex = 0.0;      // [s]
  double gamma_L = 0.0;   // Re Z / l_L [1/s]
  double gamma_S = 0.0;   // Re Z / l_S [1/s]
  double gamma = 0.0;     // max of the two
  double n_bar = 0.0;
  double figure = 0.0;  // t_ex * n_bar * gamma
  double threshold = 1.0;
  bool feasible = false;
};

/// Parallel-LCR impedance [1/R + i w C + 1/(i w L)]^-1.
inline std::complex<double> impedance(const ResonatorParams& res, double omega) {
  res.validate();
  if (!(omega > 0.0)) throw DomainError("impedance: omega must be positive");
  const double susceptance = omega * res.C_p - 1.0 / (omega * res.L_p);
  const std::complex<double> admittance{1.0 / res.R_p, susceptance};
  return 1.0 / admittance;
}

inline SeriesModeEquivalent series_equivalent(const TrapParams& trap, double m, double q,
                                              double z_im) {
  trap.validate();
  if (!(m > 0.0)) throw DomainError("series_equivalent: mass must be positive");
  if (q == 0.0) throw DomainError("series_equivalent: charge must be nonzero");
  const double ratio = 2.0 * trap.d_eff / q;
  const double l = m * ratio * ratio;
  const double omega_z0 = trap.omega_z + z_im / l;
  if (!(omega_z0 > 0.0))
    throw DomainError("series_equivalent: resonator pulling exceeds the axial frequency");
  return {l, 1.0 / (l * omega_z0 * omega_z0), omega_z0};
}

inline SeriesModeEquivalent series_equivalent(const TrapParams& trap, const Particle& p,
                                              double z_im) {
  return series_equivalent(trap, p.mass, p.charge, z_im);
}

inline double exchange_rate(double z_im, double l_L, double l_S) {
  if (!(l_L > 0.0) || !(l_S > 0.0))
    throw DomainError("exchange_rate: inductances must be positive");
  return std::abs(z_im) / (2.0 * std::sqrt(l_L * l_S));
}

inline double exchange_time(double omega_ex) {
  if (!(omega_ex > 0.0)) throw DomainError("exchange_time: omega_ex must be positive");
  return std::numbers::pi / (2.0 * omega_ex);
}

inline double dissipation_rate(double z_re, double l_L, double l_S) {
  if (!(l_L > 0.0) || !(l_S > 0.0))
    throw DomainError("dissipation_rate: inductances must be positive");
  if (z_re < 0.0) throw DomainError("dissipation_rate: Re Z must be non-negative");
  return std::max(z_re / l_L, z_re / l_S);
}

/// Bose-Einstein occupation of a mode at `omega` and temperature `T`.
inline double thermal_occupation(double omega, double T) {
  if (T < 0.0) throw DomainError("thermal_occupation: temperature must be non-negative");
  if (!(omega > 0.0)) throw DomainError("thermal_occupation: omega must be positive");
  if (T == 0.0) return 0.0;
  return 1.0 / std::expm1(constants::hbar * omega / (constants::k_B * T));
}

/// Full exchange/dissipation budget. Both traps must share the operating axial
/// frequency; L_p of `res` is replaced by the value placing the resonator
/// `detune_linewidths` below it.
inline ExchangeBudget qls_budget(const ResonatorParams& res, const TrapParams& trap_L,
                                 const TrapParams& trap_S, double T,
                                 double detune_linewidths,
                                 const Particle& particle = electron(),
                                 double threshold = 1.0) {
  trap_L.validate();
  trap_S.validate();
  if (trap_L.omega_z != trap_S.omega_z)
    throw DomainError("qls_budget: both traps must be tuned to the same axial frequency");
  if (!(threshold > 0.0)) throw DomainError("qls_budget: threshold must be positive");

  ExchangeBudget b;
  b.omega_z = trap_L.omega_z;
  b.detune_linewidths = detune_linewidths;
  b.threshold = threshold;
  b.resonator = ResonatorParams::detuned_below(res.C_p, res.R_p, b.omega_z, detune_linewidths);
  b.z_at_omega_z = impedance(b.resonator, b.omega_z);
  const double z_re = b.z_at_omega_z.real();
  const double z_im = b.z_at_omega_z.imag();
  b.c_T = 1.0 / (b.omega_z * std::abs(z_im));

  b.logic = series_equivalent(trap_L, particle, z_im);
  b.spectroscopy = series_equivalent(trap_S, particle, z_im);

  b.omega_ex = exchange_rate(z_im, b.logic.l, b.spectroscopy.l);
  b.t_ex = exchange_time(b.omega_ex);
  b.gamma_L = z_re / b.logic.l;
  b.gamma_S = z_re / b.spectroscopy.l;
  b.gamma = dissipation_rate(z_re, b.logic.l, b.spectroscopy.l);
  b.n_bar = thermal_occupation(b.omega_z, T);
  b.figure = b.t_ex * b.n_bar * b.gamma;
  b.feasible = b.figure < threshold;
  return b;
}

struct DetuningSearch {
  std::optional<double> detune_linewidths;  // empty when infeasible
  std::optional<ExchangeBudget> budget;
  double range_min = 1.0;
  double range_max = 1000.0;

  bool feasible() const { return detune_linewidths.has_value(); }
};

/// Smallest detuning (fastest exchange) whose figure t_ex n_bar Gamma is at
/// most `max_figure`. In the capacitive limit the figure falls as 1/detuning,
/// so a geometric scan followed by bisection on the first feasible bracket
/// finds the boundary.
inline DetuningSearch optimize_detuning(const ResonatorParams& res, const TrapParams& trap_L,
                                        const TrapParams& trap_S, double T, double max_figure,
                                        const Particle& particle = electron(),
                                        double range_min = 1.0, double range_max = 1000.0,
                                        int scan_points = 400) {
  if (!(max_figure > 0.0) || !(max_figure < 1.0))
    throw DomainError("optimize_detuning: constraint must lie in (0, 1)");
  if (!(range_min > 0.0) || !(range_max > range_min))
    throw DomainError("optimize_detuning: invalid detuning range");

  DetuningSearch out;
  out.range_min = range_min;
  out.range_max = range_max;

  auto figure_at = [&](double d) {
    return qls_budget(res, trap_L, trap_S, T, d, particle).figure;
  };

  const double ratio = std::pow(range_max / range_min, 1.0 / (scan_points - 1));
  double prev = range_min;
  if (figure_at(range_min) <= max_figure) {
    out.detune_linewidths = range_min;
  } else {
    for (int i = 1; i < scan_points; ++i) {
      const double d = (i == scan_points - 1) ? range_max : range_min * std::pow(ratio, i);
      if (figure_at(d) <= max_figure) {
        double lo = prev, hi = d;
        for (int k = 0; k < 200 && hi - lo > 1e-12 * hi; ++k) {
          const double mid = 0.5 * (lo + hi);
          (figure_at(mid) <= max_figure ? hi : lo) = mid;
        }
        out.detune_linewidths = hi;
        break;
      }
      prev = d;
    }
  }
  if (out.detune_linewidths)
    out.budget = qls_budget(res, trap_L, trap_S, T, *out.detune_linewidths, particle);
  return out;
}

}  // namespace qls

#pragma once

// Single-trap frequency shifts and linewidths: magnetic bottle, relativistic
// bottle, thermal cyclotron broadening, anomalous heating.

#include <cmath>

#include "qls/circuit.hpp"
#include "qls/constants.hpp"
#include "qls/error.hpp"

namespace qls {

enum class Spin { down = -1, up = +1 };

struct QuantumNumbers {
  int n_c = 0;
  Spin spin = Spin::up;
  int n_z = 0;

  double m_s() const { return 0.5 * static_cast<int>(spin); }

  void validate() const {
    if (n_c < 0 || n_z < 0) throw DomainError("QuantumNumbers: n_c and n_z must be >= 0");
  }

  bool operator==(const QuantumNumbers&) const = default;
};

/// Per-trap shifts [rad/s].
struct ShiftSet {
  double delta = 0.0;       // bottle shift per cyclotron quantum
  double delta_rel = 0.0;   // relativistic shift per cyclotron quantum (< 0)
  double broadening = 0.0;  // thermal cyclotron linewidth
};

/// Bottle shift per quantum, hbar |q| B2 / (m^2 omega_z).
inline double bottle_delta(double B2, double omega_z, double m, double q) {
  if (!(omega_z > 0.0)) throw DomainError("bottle_delta: omega_z must be positive");
  if (!(m > 0.0)) throw DomainError("bottle_delta: mass must be positive");
  return constants::hbar * std::abs(q) * B2 / (m * m * omega_z);
}

/// omega_z0 + delta (n_c + 1/2 + (g/2) m_s).
inline double axial_frequency(const QuantumNumbers& qn, double omega_z0, double delta,
                              double g = constants::g_e) {
  qn.validate();
  return omega_z0 + delta * (qn.n_c + 0.5 + 0.5 * g * qn.m_s());
}

/// -hbar omega_c omega_z / (2 m c^2).
inline double relativistic_delta(double omega_c, double omega_z, double m) {
  if (!(omega_c > 0.0) || !(omega_z > 0.0))
    throw DomainError("relativistic_delta: frequencies must be positive");
  if (!(m > 0.0)) throw DomainError("relativistic_delta: mass must be positive");
  return -constants::hbar * omega_c * omega_z / (2.0 * m * constants::c * constants::c);
}

/// Cyclotron linewidth from the thermal axial spread, |q| B2 <z^2> / m with
/// <z^2> = k_B T_z / (m omega_z^2).
inline double cyclotron_broadening(double B2, double T_z, double omega_z, double m, double q) {
  if (T_z < 0.0) throw DomainError("cyclotron_broadening: T_z must be non-negative");
  if (!(omega_z > 0.0)) throw DomainError("cyclotron_broadening: omega_z must be positive");
  if (!(m > 0.0)) throw DomainError("cyclotron_broadening: mass must be positive");
  const double z2 = constants::k_B * T_z / (m * omega_z * omega_z);
  return std::abs(q) * B2 * z2 / m;
}

inline ShiftSet shift_set(const TrapParams& trap, const Particle& p) {
  trap.validate();
  ShiftSet s;
  s.delta = bottle_delta(trap.B2_local, trap.omega_z, p.mass, p.charge);
  s.delta_rel = relativistic_delta(cyclotron_frequency(trap.B, p), trap.omega_z, p.mass);
  s.broadening = cyclotron_broadening(trap.B2_local, trap.T_axial, trap.omega_z, p.mass,
                                      p.charge);
  return s;
}

/// Electric-field noise scaling S_E = S_ref (f/f_ref)^a (d/d_ref)^b (T/T_ref)^c.
struct HeatingModel {
  double S_E_ref = 1e-12;  // [V^2 m^-2 Hz^-1]
  double freq_exp = -1.0;
  double dist_exp = -2.0;
  double temp_exp = 0.5;
  double ref_freq = 1e6;     // [Hz]
  double ref_dist = 100e-6;  // [m]
  double ref_temp = 6.0;     // [K]

  bool operator==(const HeatingModel&) const = default;
};

inline double field_noise_density(const HeatingModel& model, double omega, double d, double T) {
  if (!(omega > 0.0) || !(d > 0.0) || !(T > 0.0))
    throw DomainError("field_noise_density: frequency, distance and temperature must be positive");
  return model.S_E_ref * std::pow(angular_to_hz(omega) / model.ref_freq, model.freq_exp) *
         std::pow(d / model.ref_dist, model.dist_exp) *
         std::pow(T / model.ref_temp, model.temp_exp);
}

/// Heating rate [quanta/s] of a mode at omega_z from field noise S_E:
/// q^2 S_E / (4 m hbar omega_z).
inline double heating_rate(const HeatingModel& model, double omega_z, double d_eff, double T,
                           double m, double q) {
  if (!(m > 0.0)) throw DomainError("heating_rate: mass must be positive");
  const double S_E = field_noise_density(model, omega_z, d_eff, T);
  return q * q * S_E / (4.0 * m * constants::hbar * omega_z);
}

}  // namespace qls

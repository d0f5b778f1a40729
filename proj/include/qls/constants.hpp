#pragma once

// Physical constants (CODATA 2018) and unit conventions.
//
// Every angular frequency in the library is in rad/s. Values quoted in Hz
// are converted at I/O boundaries with hz_to_angular / angular_to_hz.

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

#include "qls/error.hpp"

namespace qls {

struct PhysicalConstants {
  double e;     ///< elementary charge [C]
  double m_e;   ///< electron mass [kg]
  double hbar;  ///< reduced Planck constant [J s]
  double k_B;   ///< Boltzmann constant [J/K]
  double c;     ///< speed of light [m/s]
  double m_p;   ///< proton mass [kg]
  double g_e;   ///< electron g-factor magnitude
  double mu_0;  ///< vacuum permeability [N/A^2]
};

inline constexpr PhysicalConstants codata2018{
    .e = 1.602176634e-19,
    .m_e = 9.1093837015e-31,
    .hbar = 1.054571817e-34,
    .k_B = 1.380649e-23,
    .c = 299792458.0,
    .m_p = 1.67262192369e-27,
    .g_e = 2.00231930436256,
    .mu_0 = 1.25663706212e-6,
};

namespace constants {
inline constexpr double e = codata2018.e;
inline constexpr double m_e = codata2018.m_e;
inline constexpr double hbar = codata2018.hbar;
inline constexpr double k_B = codata2018.k_B;
inline constexpr double c = codata2018.c;
inline constexpr double m_p = codata2018.m_p;
inline constexpr double g_e = codata2018.g_e;
inline constexpr double mu_0 = codata2018.mu_0;
}  // namespace constants

inline constexpr double two_pi = 2.0 * std::numbers::pi;

constexpr double hz_to_angular(double hz) { return hz * two_pi; }
constexpr double angular_to_hz(double omega) { return omega / two_pi; }

/// A trapped species. Charge is signed; formulas use |q| where only the
/// magnitude matters.
struct Particle {
  std::string name;
  double mass;    // [kg]
  double charge;  // [C]
  double g = constants::g_e;

  bool operator==(const Particle&) const = default;
};

inline Particle electron() { return {"electron", constants::m_e, -constants::e}; }
inline Particle positron() { return {"positron", constants::m_e, constants::e}; }
// Proton g-factor is irrelevant for the budget calculations; 5.5857 kept for
// completeness of the spin term.
inline Particle proton() { return {"proton", constants::m_p, constants::e, 5.5856946893}; }
inline Particle antiproton() { return {"antiproton", constants::m_p, -constants::e, 5.5856946893}; }

inline Particle particle_by_name(std::string_view name) {
  if (name == "electron") return electron();
  if (name == "positron") return positron();
  if (name == "proton") return proton();
  if (name == "antiproton") return antiproton();
  throw DomainError("unknown species '" + std::string(name) + "'");
}

/// Free-space cyclotron frequency |q|B/m [rad/s].
inline double cyclotron_frequency(double B, double q, double m) {
  if (!(B > 0.0)) throw DomainError("cyclotron_frequency: field must be positive");
  if (!(m > 0.0)) throw DomainError("cyclotron_frequency: mass must be positive");
  if (q == 0.0) throw DomainError("cyclotron_frequency: charge must be nonzero");
  return std::abs(q) * B / m;
}

inline double cyclotron_frequency(double B, const Particle& p) {
  return cyclotron_frequency(B, p.charge, p.mass);
}

}  // namespace qls

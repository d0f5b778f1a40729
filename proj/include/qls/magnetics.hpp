#pragma once

// On-axis field of an axially magnetized ring (annular cylinder).
//
// Magnetic-charge model: the end faces carry surface charge +M (top) and -M
// (bottom). On the axis of an annulus a <= r <= b with unit surface charge at
// axial offset u, H_z = (u/2) [ (u^2+a^2)^-1/2 - (u^2+b^2)^-1/2 ]. The axis
// lies in the bore (r_in > 0), outside the material, so B = mu_0 H there.

#include <cmath>
#include <span>
#include <vector>

#include "qls/constants.hpp"
#include "qls/error.hpp"

namespace qls {

struct RingMagnet {
  double r_in;           // [m]
  double r_out;          // [m]
  double height;         // [m]
  double magnetization;  // axial M [A/m]
  double center_z = 0.0;  // [m]

  void validate() const {
    if (!(r_in > 0.0) || !(r_out > r_in))
      throw DomainError("RingMagnet: require 0 < r_in < r_out");
    if (!(height > 0.0)) throw DomainError("RingMagnet: height must be positive");
    if (!std::isfinite(magnetization))
      throw DomainError("RingMagnet: magnetization must be finite");
    if (!std::isfinite(center_z)) throw DomainError("RingMagnet: center must be finite");
  }

  /// Magnetization from the polarization mu_0 M given in tesla.
  static RingMagnet from_polarization(double r_in, double r_out, double height,
                                      double mu0_M, double center_z = 0.0) {
    RingMagnet r{r_in, r_out, height, mu0_M / constants::mu_0, center_z};
    r.validate();
    return r;
  }

  double polarization() const { return constants::mu_0 * magnetization; }

  bool operator==(const RingMagnet&) const = default;
};

struct FieldGradients {
  double B1;  // dB/dz [T/m]
  double B2;  // (1/2) d^2B/dz^2 [T/m^2]
};

struct FieldProfile {
  std::vector<double> z;   // [m]
  std::vector<double> B;   // [T], background included
  std::vector<double> B1;  // [T/m]
  std::vector<double> B2;  // [T/m^2], half the second derivative

  std::size_t size() const { return z.size(); }
};

namespace detail {

// Annulus kernel k(u) = u/sqrt(u^2+a^2) - u/sqrt(u^2+b^2) and derivatives.
struct AnnulusKernel {
  double a2, b2;

  static double g(double u, double s2) { return u / std::sqrt(u * u + s2); }
  static double dg(double u, double s2) {
    const double r2 = u * u + s2;
    return s2 / (r2 * std::sqrt(r2));
  }
  static double d2g(double u, double s2) {
    const double r2 = u * u + s2;
    return -3.0 * s2 * u / (r2 * r2 * std::sqrt(r2));
  }

  double value(double u) const { return g(u, a2) - g(u, b2); }
  double first(double u) const { return dg(u, a2) - dg(u, b2); }
  double second(double u) const { return d2g(u, a2) - d2g(u, b2); }
};

}  // namespace detail

/// Ring contribution to B_z on the axis [T]. Background field not included.
inline double on_axis_field(const RingMagnet& ring, double z) {
  ring.validate();
  const detail::AnnulusKernel k{ring.r_in * ring.r_in, ring.r_out * ring.r_out};
  const double top = ring.center_z + 0.5 * ring.height;
  const double bottom = ring.center_z - 0.5 * ring.height;
  return 0.5 * ring.polarization() * (k.value(z - top) - k.value(z - bottom));
}

inline FieldGradients gradients(const RingMagnet& ring, double z) {
  ring.validate();
  const detail::AnnulusKernel k{ring.r_in * ring.r_in, ring.r_out * ring.r_out};
  const double top = ring.center_z + 0.5 * ring.height;
  const double bottom = ring.center_z - 0.5 * ring.height;
  const double pref = 0.5 * ring.polarization();
  return {pref * (k.first(z - top) - k.first(z - bottom)),
          0.5 * pref * (k.second(z - top) - k.second(z - bottom))};
}

/// Rescales the magnetization so that B2 at `z_ref` equals `target_B2`.
inline RingMagnet calibrate_to_B2(RingMagnet ring, double target_B2, double z_ref) {
  const double current = gradients(ring, z_ref).B2;
  if (current == 0.0 || !std::isfinite(current))
    throw DomainError("calibrate_to_B2: B2 vanishes at the reference point");
  ring.magnetization *= target_B2 / current;
  return ring;
}

/// Profile of a stack of rings in a uniform background field.
inline FieldProfile field_profile(std::span<const RingMagnet> rings, double background,
                                  std::span<const double> z) {
  FieldProfile p;
  p.z.assign(z.begin(), z.end());
  p.B.assign(z.size(), background);
  p.B1.assign(z.size(), 0.0);
  p.B2.assign(z.size(), 0.0);
  for (const auto& ring : rings) {
    for (std::size_t i = 0; i < z.size(); ++i) {
      p.B[i] += on_axis_field(ring, z[i]);
      const auto g = gradients(ring, z[i]);
      p.B1[i] += g.B1;
      p.B2[i] += g.B2;
    }
  }
  return p;
}

inline FieldProfile field_profile(const RingMagnet& ring, double background,
                                  std::span<const double> z) {
  return field_profile(std::span<const RingMagnet>(&ring, 1), background, z);
}

inline std::vector<double> linspace(double start, double stop, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = start;
    return out;
  }
  for (std::size_t i = 0; i < n; ++i)
    out[i] = start + (stop - start) * static_cast<double>(i) / static_cast<double>(n - 1);
  return out;
}

}  // namespace qls

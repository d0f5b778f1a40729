#pragma once

// Richardson-extrapolated central differences (Ridders' tableau).
//
// Independent of the closed-form derivatives in magnetics.hpp; used as the
// cross-check oracle for B1 and B2 and surfaced by the `field` command.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "qls/magnetics.hpp"

namespace qls {

class FiniteDifferenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DerivativeEstimate {
  double value;
  double error;  // tableau error estimate
};

namespace detail {

template <typename Stencil>
DerivativeEstimate ridders(Stencil&& stencil, double z, double h0) {
  constexpr int kLevels = 10;
  constexpr double kShrink = 1.4;
  constexpr double kShrink2 = kShrink * kShrink;
  if (!(h0 > 0.0) || h0 <= 64.0 * std::numeric_limits<double>::epsilon() *
                               std::max(1.0, std::abs(z)))
    throw FiniteDifferenceError("finite difference step underflow");

  std::array<std::array<double, kLevels>, kLevels> a{};
  double h = h0;
  a[0][0] = stencil(z, h);
  DerivativeEstimate best{a[0][0], std::numeric_limits<double>::max()};
  for (int i = 1; i < kLevels; ++i) {
    h /= kShrink;
    a[0][i] = stencil(z, h);
    double fac = kShrink2;
    for (int j = 1; j <= i; ++j) {
      a[j][i] = (a[j - 1][i] * fac - a[j - 1][i - 1]) / (fac - 1.0);
      fac *= kShrink2;
      const double err = std::max(std::abs(a[j][i] - a[j - 1][i]),
                                  std::abs(a[j][i] - a[j - 1][i - 1]));
      if (err <= best.error) best = {a[j][i], err};
    }
    if (std::abs(a[i][i] - a[i - 1][i - 1]) >= 2.0 * best.error) break;
  }
  return best;
}

}  // namespace detail

inline DerivativeEstimate first_derivative(const std::function<double(double)>& f, double z,
                                           double h0) {
  return detail::ridders(
      [&](double x, double h) { return (f(x + h) - f(x - h)) / (2.0 * h); }, z, h0);
}

inline DerivativeEstimate second_derivative(const std::function<double(double)>& f, double z,
                                            double h0) {
  return detail::ridders(
      [&](double x, double h) { return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h); }, z, h0);
}

/// B1 and B2 of a ring by numerical differentiation of on_axis_field.
/// The starting step is a fraction of the smallest geometric length scale.
inline FieldGradients finite_difference_gradients(const RingMagnet& ring, double z,
                                                  double step_fraction = 0.1) {
  ring.validate();
  const double h0 = step_fraction * std::min(ring.r_in, 0.5 * ring.height);
  auto field = [&ring](double x) { return on_axis_field(ring, x); };
  return {first_derivative(field, z, h0).value, 0.5 * second_derivative(field, z, h0).value};
}

}  // namespace qls

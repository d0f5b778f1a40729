#include <gtest/gtest.h>

#include "qls/circuit.hpp"
#include "support.hpp"

using namespace qls;
using test::rel_err;

namespace {

const double kOmegaZ = hz_to_angular(200e6);

TrapParams trap(double d_eff, TrapRole role, double omega_z = kOmegaZ) {
  return {d_eff, omega_z, 6.0, 9000.0, 0.01, role};
}

ExchangeBudget reference_budget(double detune = 30.0, double T = 0.01, double R_p = 500e3) {
  const auto res = ResonatorParams::detuned_below(10e-12, R_p, kOmegaZ, detune);
  return qls_budget(res, trap(1e-3, TrapRole::logic), trap(3e-3, TrapRole::spectroscopy), T,
                    detune);
}

}  // namespace

// Goldens below come from an independent 30-digit evaluation of the same
// closed forms.
TEST(Circuit, ReferenceBudgetGoldens) {
  const auto b = reference_budget();
  EXPECT_LT(rel_err(b.resonator.quality_factor(), 6253.1853071795865), 1e-12);
  EXPECT_LT(rel_err(b.z_at_omega_z.real(), 139.51547677993386), 1e-10);
  EXPECT_LT(rel_err(b.z_at_omega_z.imag(), -8350.9444868054175), 1e-10);
  EXPECT_LT(rel_err(b.logic.l, 141.94764754173096), 1e-12);
  EXPECT_LT(rel_err(b.spectroscopy.l, 1277.5288278755786), 1e-12);
  EXPECT_LT(rel_err(b.omega_ex, 9.8051930076900791), 1e-10);
  EXPECT_LT(rel_err(b.t_ex, 0.16020044945193251), 1e-10);
  EXPECT_LT(rel_err(b.gamma, 0.98286571983461671), 1e-10);
  EXPECT_LT(rel_err(b.n_bar, 0.62061645822930848), 1e-12);
  EXPECT_LT(rel_err(b.figure, 0.097719493399670516), 1e-10);
  EXPECT_TRUE(b.feasible);
  EXPECT_EQ(b.gamma, b.gamma_L);
}

TEST(Circuit, ImpedanceAtResonanceIsResistive) {
  const ResonatorParams res{6.3934814745607948e-8, 10e-12, 500e3};
  const auto z = impedance(res, res.center_frequency());
  EXPECT_LT(rel_err(z.real(), 500e3), 1e-12);
  EXPECT_LT(std::abs(z.imag()), 1e-12 * 500e3 * 1e3);
}

TEST(Circuit, ImpedanceSignAboveAndBelowResonance) {
  const ResonatorParams res{6.4e-8, 10e-12, 500e3};
  const double w0 = res.center_frequency();
  EXPECT_GT(impedance(res, 0.99 * w0).imag(), 0.0);  // inductive below
  EXPECT_LT(impedance(res, 1.01 * w0).imag(), 0.0);  // capacitive above
}

TEST(Circuit, DetunedResonatorPlacement) {
  const auto res = ResonatorParams::detuned_below(10e-12, 500e3, kOmegaZ, 30.0);
  EXPECT_LT(rel_err(res.center_frequency(), kOmegaZ - 30.0 * res.linewidth()), 1e-12);
}

TEST(Circuit, SeriesEquivalentReproducesOperatingFrequency) {
  const auto b = reference_budget();
  EXPECT_LT(rel_err(1.0 / std::sqrt(b.logic.l * b.logic.c), b.logic.omega_z0), 1e-12);
  EXPECT_LT(b.logic.omega_z0, kOmegaZ);  // the resonator pulls the mode upward
}

TEST(Circuit, ThermalOccupationLimits) {
  EXPECT_EQ(thermal_occupation(kOmegaZ, 0.0), 0.0);
  // High-temperature limit k_B T / hbar omega - 1/2.
  const double x = constants::k_B * 100.0 / (constants::hbar * kOmegaZ);
  EXPECT_NEAR(thermal_occupation(kOmegaZ, 100.0), x - 0.5, 1e-6 * x);
}

TEST(Circuit, ProtonBudgetIsInfeasible) {
  const double wz = hz_to_angular(1e6);
  const auto res = ResonatorParams::detuned_below(10e-12, 95.5e6, wz, 30.0);
  const auto b = qls_budget(res, trap(1e-3, TrapRole::logic, wz),
                            trap(3e-3, TrapRole::spectroscopy, wz), 0.01, 30.0, proton());
  EXPECT_LT(rel_err(b.n_bar, 207.8665912977147), 1e-12);
  EXPECT_LT(rel_err(b.resonator.quality_factor(), 5970.4419683565051), 1e-12);
  EXPECT_LT(rel_err(b.figure, 32.733435368271205), 1e-10);
  EXPECT_FALSE(b.feasible);
}

TEST(Circuit, InvalidInputsThrow) {
  EXPECT_THROW(ResonatorParams::detuned_below(-1e-12, 500e3, kOmegaZ, 30.0), DomainError);
  EXPECT_THROW(thermal_occupation(kOmegaZ, -1.0), DomainError);
  EXPECT_THROW(exchange_rate(1.0, 0.0, 1.0), DomainError);
  EXPECT_THROW(exchange_time(0.0), DomainError);
  const auto res = ResonatorParams::detuned_below(10e-12, 500e3, kOmegaZ, 30.0);
  EXPECT_THROW(qls_budget(res, trap(1e-3, TrapRole::logic),
                          trap(3e-3, TrapRole::spectroscopy, 1.01 * kOmegaZ), 0.01, 30.0),
               DomainError);
  EXPECT_THROW(qls_budget(res, trap(-1e-3, TrapRole::logic), trap(3e-3, TrapRole::spectroscopy),
                          0.01, 30.0),
               DomainError);
}

TEST(Circuit, OptimizeDetuningMeetsTarget) {
  const auto res = ResonatorParams::detuned_below(10e-12, 500e3, kOmegaZ, 30.0);
  const auto s = optimize_detuning(res, trap(1e-3, TrapRole::logic),
                                   trap(3e-3, TrapRole::spectroscopy), 0.01, 0.2);
  ASSERT_TRUE(s.feasible());
  EXPECT_LE(s.budget->figure, 0.2 * (1 + 1e-9));
  EXPECT_GT(s.budget->figure, 0.19);
}

// ---- properties ----

TEST(CircuitProperty, InductanceScalesWithMassAndSquareOfSize) {
  test::Sampler s(1);
  for (int i = 0; i < 50; ++i) {
    const double d = s.log_uniform(1e-5, 1e1);  // six decades
    const auto t = trap(d, TrapRole::logic);
    const auto e = series_equivalent(t, electron(), 0.0);
    const auto p = series_equivalent(t, proton(), 0.0);
    EXPECT_LT(rel_err(p.l / e.l, constants::m_p / constants::m_e), 1e-12);
    const auto e2 = series_equivalent(trap(2.0 * d, TrapRole::logic), electron(), 0.0);
    EXPECT_LT(rel_err(e2.l / e.l, 4.0), 1e-12);
  }
}

TEST(CircuitProperty, FigureDecreasesWithDetuning) {
  double prev = reference_budget(5.0).figure;
  for (double det = 6.0; det <= 100.0; det += 1.0) {
    const double f = reference_budget(det).figure;
    EXPECT_LT(f, prev) << "detune " << det;
    prev = f;
  }
}

TEST(CircuitProperty, FigureImprovesWithResistance) {
  test::Sampler s(2);
  for (int i = 0; i < 30; ++i) {
    const double R = s.log_uniform(1e4, 1e8);
    EXPECT_LT(reference_budget(30.0, 0.01, 2.0 * R).figure, reference_budget(30.0, 0.01, R).figure);
  }
}

TEST(CircuitProperty, OccupationMatchesBoseAndIsMonotoneInT) {
  test::Sampler s(3);
  double prev = -1.0;
  for (double T = 1e-4; T < 1e2; T *= 1.3) {
    const double n = thermal_occupation(kOmegaZ, T);
    const double x = constants::hbar * kOmegaZ / (constants::k_B * T);
    EXPECT_LT(std::abs(n - 1.0 / (std::exp(x) - 1.0)), 1e-12 * std::max(1.0, n) + 1e-300);
    EXPECT_GT(n, prev);
    prev = n;
  }
}

TEST(CircuitProperty, ExchangeRateSymmetricInTraps) {
  test::Sampler s(4);
  for (int i = 0; i < 50; ++i) {
    const double z = s.uniform(-1e5, 1e5), a = s.log_uniform(1e-3, 1e6), b = s.log_uniform(1e-3, 1e6);
    EXPECT_EQ(exchange_rate(z, a, b), exchange_rate(z, b, a));
    EXPECT_EQ(dissipation_rate(std::abs(z), a, b), dissipation_rate(std::abs(z), b, a));
  }
}

#include <gtest/gtest.h>

#include "qls/constants.hpp"
#include "qls/error.hpp"

using namespace qls;

TEST(Constants, Codata2018ExactValues) {
  EXPECT_EQ(constants::e, 1.602176634e-19);
  EXPECT_EQ(constants::hbar, 1.054571817e-34);
  EXPECT_EQ(constants::k_B, 1.380649e-23);
  EXPECT_EQ(constants::c, 299792458.0);
  EXPECT_EQ(constants::m_e, 9.1093837015e-31);
}

TEST(Constants, HzRoundTrip) {
  for (double f : {1.0, 1e6, 2e8, 1.7e11}) EXPECT_DOUBLE_EQ(angular_to_hz(hz_to_angular(f)), f);
  EXPECT_DOUBLE_EQ(hz_to_angular(1.0), 2.0 * std::numbers::pi);
}

TEST(Constants, ProtonElectronMassRatio) {
  EXPECT_NEAR(proton().mass / electron().mass, 1836.15267343, 1e-6);
}

TEST(Constants, ParticleLookup) {
  EXPECT_EQ(particle_by_name("positron").charge, constants::e);
  EXPECT_EQ(particle_by_name("electron").charge, -constants::e);
  EXPECT_THROW(particle_by_name("muon"), DomainError);
}

TEST(Constants, CyclotronFrequencyElectronSixTesla) {
  // e B / m_e, evaluated in 30-digit arithmetic.
  EXPECT_NEAR(cyclotron_frequency(6.0, electron()), 1055292006463.2981, 1e-3);
}

TEST(Constants, CyclotronFrequencyRejectsBadInput) {
  EXPECT_THROW(cyclotron_frequency(0.0, electron()), DomainError);
  EXPECT_THROW(cyclotron_frequency(1.0, 0.0, constants::m_e), DomainError);
  EXPECT_THROW(cyclotron_frequency(1.0, constants::e, -1.0), DomainError);
}

TEST(ConstantsProperty, CyclotronLinearInFieldOverSixDecades) {
  const double w1 = cyclotron_frequency(1.0, electron());
  for (double B = 1e-3; B <= 1e3; B *= 10.0)
    EXPECT_NEAR(cyclotron_frequency(B, electron()) / w1, B, 1e-12 * B);
}

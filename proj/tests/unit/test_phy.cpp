#include <gtest/gtest.h>

#include <cmath>

#include "netfec/constellation_rates.hpp"
#include "netfec/error.hpp"
#include "netfec/gn_phy.hpp"

using namespace netfec;

TEST(Phy, AsePowerFromTableOne) {
  const FiberParams p;
  EXPECT_NEAR(ase_power_per_span(p) * 1e6, 0.747, 0.747 * 0.01);
  // F G h nu B written out by hand.
  const double h = 6.62607015e-34, c = 299792458.0;
  const double nu = c / 1550e-9;
  const double g = std::pow(10.0, 0.22 * 80.0 / 10.0);
  const double f = std::pow(10.0, 0.5);
  EXPECT_NEAR(ase_power_per_span(p), f * g * h * nu * 32e9, 1e-15);
}

TEST(Phy, OptimalLaunchPower) {
  const auto co = default_coefficients(FiberParams{});
  EXPECT_NEAR(watt_to_dbm(co.launch_power_w), -1.0, 0.1);
  EXPECT_NEAR(co.launch_power_w, optimal_launch_power_numeric(co.p_ase_w, co.eta_per_w2), 1e-9);
  // Stationary point of P / (P_ASE + eta P^3).
  const auto snr = [&](double p) { return path_snr(1, p, co.p_ase_w, co.eta_per_w2); };
  const double p = co.launch_power_w;
  EXPECT_GT(snr(p), snr(p * 1.01));
  EXPECT_GT(snr(p), snr(p * 0.99));
}

TEST(Phy, SpanSnrAndScaling) {
  const auto co = default_coefficients(FiberParams{});
  EXPECT_NEAR(linear_to_db(path_snr(1, co)), 28.5, 0.1);
  for (int n : {2, 5, 17}) EXPECT_NEAR(path_snr(n, co), path_snr(1, co) / n, 1e-9 * path_snr(1, co));
  // At the optimum the nonlinear term is half the ASE term.
  const double p = co.launch_power_w;
  EXPECT_NEAR(co.eta_per_w2 * p * p * p, co.p_ase_w / 2.0, 1e-12 * co.p_ase_w);
}

TEST(Phy, GnEtaNearBundledValue) {
  const double eta = gn_eta(FiberParams{});
  EXPECT_GT(eta, 600.0);
  EXPECT_LT(eta, 900.0);
}

TEST(Phy, ExcessGainVariantIsSlightlyLower) {
  FiberParams p;
  const double base = ase_power_per_span(p);
  p.ase_model = AseModel::kExcessGain;
  const double alt = ase_power_per_span(p);
  EXPECT_LT(alt, base);
  EXPECT_GT(alt, 0.97 * base);
}

TEST(Phy, Validation) {
  FiberParams p;
  p.span_length_km = -1.0;
  EXPECT_THROW(p.validate(), Error);
  FiberParams q;
  q.channel_spacing_hz = 10e9;
  EXPECT_THROW(q.validate(), Error);
  EXPECT_THROW(path_snr(0, 1e-3, 1e-6, 742.0), Error);
  EXPECT_NEAR(watt_to_dbm(dbm_to_watt(3.3)), 3.3, 1e-12);
}

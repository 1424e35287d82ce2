#include "netfec/gn_phy.hpp"

#include <cmath>
#include <numbers>

#include "netfec/error.hpp"

namespace netfec {
namespace {

constexpr double kPlanck = 6.62607015e-34;
constexpr double kLightSpeed = 299792458.0;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || std::isinf(v)) throw Error(ErrorCode::kConfig, std::string(what) + " must be positive");
}

double single_span_snr(double p, double p_ase, double eta) { return p / (p_ase + eta * p * p * p); }

}  // namespace

void FiberParams::validate() const {
  require_positive(attenuation_db_per_km, "attenuation_db_per_km");
  require_positive(dispersion_ps_nm_km, "dispersion_ps_nm_km");
  require_positive(gamma_per_w_km, "gamma_per_w_km");
  require_positive(span_length_km, "span_length_km");
  require_positive(edfa_noise_figure_db, "edfa_noise_figure_db");
  require_positive(symbol_rate_hz, "symbol_rate_hz");
  require_positive(channel_spacing_hz, "channel_spacing_hz");
  require_positive(center_wavelength_nm, "center_wavelength_nm");
  if (num_wdm_channels < 1) throw Error(ErrorCode::kConfig, "num_wdm_channels must be positive");
  if (channel_spacing_hz < symbol_rate_hz) {
    throw Error(ErrorCode::kConfig, "channel spacing narrower than the symbol rate");
  }
}

double dbm_to_watt(double dbm) noexcept { return 1e-3 * std::pow(10.0, dbm / 10.0); }
double watt_to_dbm(double w) noexcept { return 10.0 * std::log10(w / 1e-3); }

double ase_power_per_span(const FiberParams& params) {
  const double gain = std::pow(10.0, params.attenuation_db_per_km * params.span_length_km / 10.0);
  const double nf = std::pow(10.0, params.edfa_noise_figure_db / 10.0);
  const double nu = kLightSpeed / (params.center_wavelength_nm * 1e-9);
  const double g = params.ase_model == AseModel::kGainNoiseFigure ? gain : gain - 1.0;
  return nf * g * kPlanck * nu * params.symbol_rate_hz;
}

double path_snr(int n_spans, double p_w, double p_ase_w, double eta_per_w2) {
  if (n_spans < 1) throw Error(ErrorCode::kDomain, "a route has at least one span");
  if (p_w < 0.0) throw Error(ErrorCode::kDomain, "launch power must be non-negative");
  if (p_w == 0.0) return 0.0;
  return single_span_snr(p_w, p_ase_w, eta_per_w2) / n_spans;
}

double path_snr(int n_spans, const GnCoefficients& c) {
  return path_snr(n_spans, c.launch_power_w, c.p_ase_w, c.eta_per_w2);
}

double optimal_launch_power(double p_ase_w, double eta_per_w2) {
  if (!(p_ase_w > 0.0) || !(eta_per_w2 > 0.0)) {
    throw Error(ErrorCode::kDomain, "P_ASE and eta must be positive");
  }
  return std::cbrt(p_ase_w / (2.0 * eta_per_w2));
}

double optimal_launch_power_numeric(double p_ase_w, double eta_per_w2) {
  const double guess = watt_to_dbm(optimal_launch_power(p_ase_w, eta_per_w2));
  const auto f = [&](double dbm) { return single_span_snr(dbm_to_watt(dbm), p_ase_w, eta_per_w2); };
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = guess - 20.0;
  double b = guess + 20.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  while (b - a > 1e-6) {
    if (f(c) > f(d)) {
      b = d;
    } else {
      a = c;
    }
    c = b - inv_phi * (b - a);
    d = a + inv_phi * (b - a);
  }
  return dbm_to_watt(0.5 * (a + b));
}

// Closed-form incoherent GN for the centre channel of a Nyquist-spaced comb
// (rectangular spectra), minus the self-channel term.
double gn_eta(const FiberParams& params) {
  params.validate();
  const double alpha = params.attenuation_db_per_km * std::numbers::ln10 / 10.0 / 1e3;  // 1/m
  const double length = params.span_length_km * 1e3;
  const double l_eff = (1.0 - std::exp(-alpha * length)) / alpha;
  const double l_eff_a = 1.0 / alpha;
  const double lambda = params.center_wavelength_nm * 1e-9;
  const double d = params.dispersion_ps_nm_km * 1e-6;  // s/m^2
  const double beta2 = d * lambda * lambda / (2.0 * std::numbers::pi * kLightSpeed);
  const double gamma = params.gamma_per_w_km / 1e3;
  const double b = params.symbol_rate_hz;
  const double pi2 = std::numbers::pi * std::numbers::pi;

  const double arg = 0.5 * pi2 * beta2 * l_eff_a * b * b;
  const double comb = std::pow(static_cast<double>(params.num_wdm_channels),
                               2.0 * b / params.channel_spacing_hz);
  const double xpm = std::asinh(arg * comb) - std::asinh(arg);
  return 8.0 / 27.0 * gamma * gamma * l_eff * l_eff * xpm /
         (std::numbers::pi * beta2 * l_eff_a * b * b);
}

GnCoefficients default_coefficients(const FiberParams& params, double eta_per_w2) {
  params.validate();
  require_positive(eta_per_w2, "eta");
  const double p_ase = ase_power_per_span(params);
  return {p_ase, eta_per_w2, optimal_launch_power(p_ase, eta_per_w2)};
}

}  // namespace netfec

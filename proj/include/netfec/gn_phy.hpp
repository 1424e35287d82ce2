#pragma once

// Incoherent GN-model link budget. Powers are in watts, SNRs linear.

namespace netfec {

// P_ASE = F G h nu B by default. kExcessGain uses F (G - 1) h nu B, which
// vanishes for a zero-length span but sits about 2% below the usual figure.
enum class AseModel { kGainNoiseFigure, kExcessGain };

struct FiberParams {
  double attenuation_db_per_km = 0.22;
  double dispersion_ps_nm_km = 16.7;
  double gamma_per_w_km = 1.3;
  double span_length_km = 80.0;
  double edfa_noise_figure_db = 5.0;
  double symbol_rate_hz = 32e9;
  double channel_spacing_hz = 50e9;
  int num_wdm_channels = 80;
  double center_wavelength_nm = 1550.0;
  AseModel ase_model = AseModel::kGainNoiseFigure;

  // Throws Error(kConfig) on a non-positive field.
  void validate() const;
};

inline constexpr double kDefaultEta = 742.0;  // W^-2 per span

struct GnCoefficients {
  double p_ase_w;
  double eta_per_w2;
  double launch_power_w;
};

double ase_power_per_span(const FiberParams& params);
double path_snr(int n_spans, double p_w, double p_ase_w, double eta_per_w2);
double path_snr(int n_spans, const GnCoefficients& coeffs);
double optimal_launch_power(double p_ase_w, double eta_per_w2);
// Numerical argmax of the single-span SNR by golden-section search on a dBm axis.
double optimal_launch_power_numeric(double p_ase_w, double eta_per_w2);
double gn_eta(const FiberParams& params);

// P_ASE from params, the given eta, and the SNR-optimal launch power.
GnCoefficients default_coefficients(const FiberParams& params, double eta_per_w2 = kDefaultEta);

double dbm_to_watt(double dbm) noexcept;
double watt_to_dbm(double w) noexcept;

}  // namespace netfec

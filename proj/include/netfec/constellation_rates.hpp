#pragma once

// Achievable-rate computations for polarization-multiplexed square QAM with
// bit-wise receivers. All SNR arguments are linear symbol SNRs; conversions to
// and from dB happen at the I/O boundary (see db_to_linear / linear_to_db).
//
// Every rate returned here is a spectral efficiency in bit/symbol over two
// polarizations, i.e. twice the per-polarization value.

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace netfec {

inline constexpr int kMinBitsPerSymbol = 2;
inline constexpr int kMaxBitsPerSymbol = 10;

enum class RateFamily { kCapacity, kHd, kSdGmi, kMi };

std::string_view to_string(RateFamily family) noexcept;
RateFamily parse_rate_family(std::string_view text);

double db_to_linear(double db) noexcept;
double linear_to_db(double linear) noexcept;

// True iff m is one of the supported square-QAM orders {2,4,6,8,10}.
bool is_supported_format(int m) noexcept;

// Square M-QAM built as the product of two identical sqrt(M)-PAM dimensions.
// Each dimension carries m/2 bits labeled with the binary-reflected Gray code.
class Constellation {
 public:
  static Constellation square_qam(int m);

  int bits_per_symbol() const noexcept { return m_; }
  int order() const noexcept { return 1 << m_; }
  int bits_per_dimension() const noexcept { return m_ / 2; }
  int levels_per_dimension() const noexcept { return static_cast<int>(levels_.size()); }

  // Ascending PAM amplitudes, scaled so the 2-D symbol energy averages to 1.
  std::span<const double> pam_levels() const noexcept { return levels_; }
  // BRGC label of each PAM level (index-aligned with pam_levels()).
  std::span<const std::uint32_t> labels() const noexcept { return labels_; }
  // Decision thresholds between adjacent levels (size levels-1).
  std::span<const double> thresholds() const noexcept { return thresholds_; }

  double mean_symbol_energy() const noexcept;
  int label_bit(int level, int bit) const noexcept {
    return static_cast<int>((labels_[level] >> bit) & 1u);
  }

 private:
  explicit Constellation(int m);

  int m_;
  std::vector<double> levels_;
  std::vector<std::uint32_t> labels_;
  std::vector<double> thresholds_;
};

enum class OverheadDirection { kRateToOverhead, kOverheadToRate };

// Code rate / FEC overhead pair kept mutually consistent: OH = 100 (1/Rc - 1).
class CodeRateSpec {
 public:
  static CodeRateSpec from_rate(double rc);
  static CodeRateSpec from_overhead_percent(double oh);

  double rate() const noexcept { return rc_; }
  double overhead_percent() const noexcept { return oh_; }

 private:
  CodeRateSpec(double rc, double oh) : rc_(rc), oh_(oh) {}
  double rc_;
  double oh_;
};

double convert_overhead(double value, OverheadDirection direction);

double binary_entropy(double p);

// Exact average pre-FEC BER over the m bit positions of Gray-labeled M-QAM.
double ber_qam(int m, double snr);
// Exact pre-FEC BER of each PAM bit position (m/2 entries). Both QAM
// dimensions share these values.
std::vector<double> ber_per_bit(int m, double snr);

// Hard-decision bit-wise achievable rate: sum over the m bit positions of
// 1 - Hb(BER_k), times two polarizations.
double hd_rate(int m, double snr);
// 2 I(X;Y) for uniform inputs, by Gauss-Hermite quadrature.
double mi_qam(int m, double snr);
// 2 sum_k I(B_k; L_k), by Gauss-Hermite quadrature.
double gmi_qam(int m, double snr);
double awgn_capacity(double snr);

// Rate of the given family; m is ignored for kCapacity.
double family_rate(RateFamily family, int m, double snr);

struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;  // weight function exp(-x^2)
};
GaussHermiteRule gauss_hermite(int n);

struct RatePoint {
  double snr_db;
  double se;
};

struct RateCurve {
  RateFamily family;
  std::optional<int> m;  // absent for kCapacity
  std::vector<RatePoint> points;
};

RateCurve tabulate_curve(RateFamily family, std::optional<int> m, double snr_db_lo,
                         double snr_db_hi, double step_db);

struct Crossing {
  int m_low;
  int m_high;
  std::optional<double> snr_db;  // empty when the curves do not cross below 40 dB
};

// Where adjacent formats' rate curves intersect (family kHd or kSdGmi).
std::vector<Crossing> find_crossings(RateFamily family);

// Smallest SNR (dB) at which family_rate(m, snr) >= 2 m rc.
// Throws Error(kUnreachable) when not attainable below 40 dB.
double snr_threshold(RateFamily family, int m, double rc);

// Rates of one family for every supported format, tabulated on a 0.05 dB grid
// and linearly interpolated. Outside the grid the exact functions are used.
class RateTable {
 public:
  static constexpr double kGridLoDb = -20.0;
  static constexpr double kGridHiDb = 50.0;
  static constexpr double kGridStepDb = 0.05;

  explicit RateTable(RateFamily family);

  // Process-wide cached table; built on first use, thread-safe.
  static const RateTable& shared(RateFamily family);

  RateFamily family() const noexcept { return family_; }
  double rate(int m, double snr) const;

 private:
  RateFamily family_;
  std::vector<std::vector<double>> knots_;  // [format index][grid index]
};

struct EnvelopePoint {
  int m;  // 0 for the capacity family
  double se;
};

// Pointwise max over formats m <= m_max of a tabulated family; ties go to the
// smaller format.
class RateEnvelope {
 public:
  RateEnvelope(const RateTable& table, int m_max);
  EnvelopePoint operator()(double snr) const;

 private:
  const RateTable* table_;
  int m_max_;
};

RateEnvelope rate_envelope(RateFamily family, int m_max);

}  // namespace netfec

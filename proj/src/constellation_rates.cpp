#include "netfec/constellation_rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "netfec/error.hpp"

namespace netfec {
namespace {

constexpr int kQuadratureNodes = 64;
constexpr double kSearchTopDb = 40.0;
constexpr double kThresholdFloorDb = -50.0;
constexpr double kCrossingScanFromDb = -10.0;
constexpr double kBracketStepDb = 0.5;
constexpr double kBisectionTolDb = 1e-4;

void require_format(int m) {
  if (!is_supported_format(m)) {
    throw Error(ErrorCode::kDomain,
                "unsupported QAM format m=" + std::to_string(m) + " (expected 2,4,6,8,10)");
  }
}

void require_positive_snr(double snr) {
  if (!(snr > 0.0) || std::isinf(snr)) {
    throw Error(ErrorCode::kDomain, "SNR must be positive and finite");
  }
}

// P(a < Z < b) for a standard normal Z, avoiding cancellation in the tails.
double normal_interval(double a, double b) {
  constexpr double kInvSqrt2 = 0.70710678118654752440;
  if (a >= 0.0) return 0.5 * (std::erfc(a * kInvSqrt2) - std::erfc(b * kInvSqrt2));
  if (b <= 0.0) return 0.5 * (std::erfc(-b * kInvSqrt2) - std::erfc(-a * kInvSqrt2));
  return 1.0 - 0.5 * std::erfc(-a * kInvSqrt2) - 0.5 * std::erfc(b * kInvSqrt2);
}

double log_sum_exp(const double* v, std::size_t n) {
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) top = std::max(top, v[i]);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::exp(v[i] - top);
  return top + std::log(s);
}

struct PamInformation {
  double mi;   // I(X;Y) of one PAM dimension, bits
  double gmi;  // sum_k I(B_k;Y) of one PAM dimension, bits
};

const GaussHermiteRule& quadrature() {
  static const GaussHermiteRule rule = gauss_hermite(kQuadratureNodes);
  return rule;
}

// Both quantities share the same likelihood evaluations. The received sample is
// y = x_i + z with z ~ N(0, sigma^2); writing the likelihood ratios relative to
// the transmitted point keeps exponents bounded as sigma -> 0.
PamInformation pam_information(const Constellation& c, double snr) {
  const auto levels = c.pam_levels();
  const int n_levels = c.levels_per_dimension();
  const int n_bits = c.bits_per_dimension();
  const double sigma2 = 1.0 / (2.0 * snr);
  const double scale = std::sqrt(2.0 * sigma2);
  const auto& gh = quadrature();
  const double norm = 1.0 / std::sqrt(std::numbers::pi);

  std::vector<double> expo(n_levels);
  std::vector<double> same(n_levels);
  double mi_loss = 0.0;
  double gmi_loss = 0.0;
  for (int i = 0; i < n_levels; ++i) {
    for (std::size_t q = 0; q < gh.nodes.size(); ++q) {
      const double z = scale * gh.nodes[q];
      for (int j = 0; j < n_levels; ++j) {
        const double d = levels[i] - levels[j];
        expo[j] = -(d * d + 2.0 * d * z) / (2.0 * sigma2);
      }
      const double all = log_sum_exp(expo.data(), expo.size());
      const double w = gh.weights[q] * norm;
      mi_loss += w * all;
      for (int k = 0; k < n_bits; ++k) {
        std::size_t n_same = 0;
        for (int j = 0; j < n_levels; ++j) {
          if (c.label_bit(j, k) == c.label_bit(i, k)) same[n_same++] = expo[j];
        }
        gmi_loss += w * (all - log_sum_exp(same.data(), n_same));
      }
    }
  }
  const double inv_ln2 = 1.0 / std::numbers::ln2;
  const double mi = std::log2(static_cast<double>(n_levels)) - mi_loss * inv_ln2 / n_levels;
  const double gmi = n_bits - gmi_loss * inv_ln2 / n_levels;
  return {std::max(mi, 0.0), std::max(gmi, 0.0)};
}

std::size_t format_index(int m) { return static_cast<std::size_t>(m / 2 - 1); }

double grid_db(int i) { return RateTable::kGridLoDb + i * RateTable::kGridStepDb; }

int grid_size() {
  return static_cast<int>(std::lround((RateTable::kGridHiDb - RateTable::kGridLoDb) /
                                      RateTable::kGridStepDb)) + 1;
}

// Bisection for the first dB value where pred flips to true; pred(lo) is false
// and pred(hi) is true on entry.
template <class Pred>
double bisect_db(double lo, double hi, Pred pred) {
  while (hi - lo > kBisectionTolDb) {
    const double mid = 0.5 * (lo + hi);
    if (pred(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace

std::string_view to_string(RateFamily family) noexcept {
  switch (family) {
    case RateFamily::kCapacity: return "CAPACITY";
    case RateFamily::kHd: return "HD";
    case RateFamily::kSdGmi: return "SD_GMI";
    case RateFamily::kMi: return "MI";
  }
  return "?";
}

RateFamily parse_rate_family(std::string_view text) {
  std::string s(text);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return std::toupper(ch); });
  if (s == "CAPACITY") return RateFamily::kCapacity;
  if (s == "HD") return RateFamily::kHd;
  if (s == "SD" || s == "SD_GMI" || s == "GMI") return RateFamily::kSdGmi;
  if (s == "MI") return RateFamily::kMi;
  throw Error(ErrorCode::kConfig, "unknown rate family '" + std::string(text) + "'");
}

double db_to_linear(double db) noexcept { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) noexcept { return 10.0 * std::log10(linear); }

bool is_supported_format(int m) noexcept {
  return m >= kMinBitsPerSymbol && m <= kMaxBitsPerSymbol && m % 2 == 0;
}

Constellation::Constellation(int m) : m_(m) {
  const int n = 1 << (m / 2);
  // Two dimensions of odd integers have energy 2 (n^2 - 1) / 3.
  const double d = std::sqrt(3.0 / (2.0 * (static_cast<double>(n) * n - 1.0)));
  levels_.resize(n);
  labels_.resize(n);
  for (int i = 0; i < n; ++i) {
    levels_[i] = (2.0 * i - n + 1) * d;
    labels_[i] = static_cast<std::uint32_t>(i ^ (i >> 1));
  }
  for (int i = 0; i + 1 < n; ++i) thresholds_.push_back(0.5 * (levels_[i] + levels_[i + 1]));
}

Constellation Constellation::square_qam(int m) {
  require_format(m);
  return Constellation(m);
}

double Constellation::mean_symbol_energy() const noexcept {
  double e = 0.0;
  for (double a : levels_) e += a * a;
  return 2.0 * e / static_cast<double>(levels_.size());
}

CodeRateSpec CodeRateSpec::from_rate(double rc) {
  if (!(rc > 0.0 && rc <= 1.0)) throw Error(ErrorCode::kDomain, "code rate must lie in (0, 1]");
  return {rc, convert_overhead(rc, OverheadDirection::kRateToOverhead)};
}

CodeRateSpec CodeRateSpec::from_overhead_percent(double oh) {
  return {convert_overhead(oh, OverheadDirection::kOverheadToRate), oh};
}

double convert_overhead(double value, OverheadDirection direction) {
  if (direction == OverheadDirection::kRateToOverhead) {
    if (!(value > 0.0 && value <= 1.0)) {
      throw Error(ErrorCode::kDomain, "code rate must lie in (0, 1]");
    }
    return 100.0 * (1.0 / value - 1.0);
  }
  if (!(value >= 0.0) || std::isinf(value)) {
    throw Error(ErrorCode::kDomain, "overhead must be a finite non-negative percentage");
  }
  return 1.0 / (1.0 + value / 100.0);
}

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::kDomain, "probability outside [0, 1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

std::vector<double> ber_per_bit(int m, double snr) {
  require_format(m);
  require_positive_snr(snr);
  const Constellation c = Constellation::square_qam(m);
  const auto levels = c.pam_levels();
  const auto th = c.thresholds();
  const int n = c.levels_per_dimension();
  const double sigma = std::sqrt(1.0 / (2.0 * snr));
  const double inf = std::numeric_limits<double>::infinity();

  std::vector<double> ber(c.bits_per_dimension(), 0.0);
  for (int k = 0; k < c.bits_per_dimension(); ++k) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (c.label_bit(i, k) == c.label_bit(j, k)) continue;
        const double lo = j == 0 ? -inf : (th[j - 1] - levels[i]) / sigma;
        const double hi = j == n - 1 ? inf : (th[j] - levels[i]) / sigma;
        sum += normal_interval(lo, hi);
      }
    }
    ber[k] = sum / n;
  }
  return ber;
}

double ber_qam(int m, double snr) {
  const auto per_bit = ber_per_bit(m, snr);
  double s = 0.0;
  for (double b : per_bit) s += b;
  return s / static_cast<double>(per_bit.size());
}

double hd_rate(int m, double snr) {
  require_format(m);
  if (snr == 0.0) return 0.0;
  double per_dim = 0.0;
  for (double b : ber_per_bit(m, snr)) per_dim += 1.0 - binary_entropy(std::min(b, 0.5));
  // Two PAM dimensions per polarization, two polarizations.
  return 4.0 * per_dim;
}

double mi_qam(int m, double snr) {
  require_format(m);
  if (snr == 0.0) return 0.0;
  require_positive_snr(snr);
  return 4.0 * pam_information(Constellation::square_qam(m), snr).mi;
}

double gmi_qam(int m, double snr) {
  require_format(m);
  if (snr == 0.0) return 0.0;
  require_positive_snr(snr);
  return 4.0 * pam_information(Constellation::square_qam(m), snr).gmi;
}

double awgn_capacity(double snr) {
  if (!(snr >= 0.0)) throw Error(ErrorCode::kDomain, "SNR must be non-negative");
  return 2.0 * std::log2(1.0 + snr);
}

double family_rate(RateFamily family, int m, double snr) {
  switch (family) {
    case RateFamily::kCapacity: return awgn_capacity(snr);
    case RateFamily::kHd: return hd_rate(m, snr);
    case RateFamily::kSdGmi: return gmi_qam(m, snr);
    case RateFamily::kMi: return mi_qam(m, snr);
  }
  throw Error(ErrorCode::kDomain, "unknown rate family");
}

GaussHermiteRule gauss_hermite(int n) {
  if (n < 1) throw Error(ErrorCode::kDomain, "quadrature order must be positive");
  // Newton iteration on orthonormal Hermite polynomials, largest root first.
  constexpr double kPiM4 = 0.7511255444649425;  // pi^(-1/4)
  GaussHermiteRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  const int half = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < half; ++i) {
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * rule.nodes[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * rule.nodes[1];
    } else {
      z = 2.0 * z - rule.nodes[i - 2];
    }
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = kPiM4;
      double p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double prev = z;
      z = prev - p1 / pp;
      if (std::abs(z - prev) <= 1e-14) break;
    }
    rule.nodes[i] = z;
    rule.nodes[n - 1 - i] = -z;
    rule.weights[i] = 2.0 / (pp * pp);
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  return rule;
}

RateCurve tabulate_curve(RateFamily family, std::optional<int> m, double snr_db_lo,
                         double snr_db_hi, double step_db) {
  if (!(step_db > 0.0) || snr_db_hi < snr_db_lo) {
    throw Error(ErrorCode::kDomain, "invalid SNR range");
  }
  if (family != RateFamily::kCapacity) {
    if (!m) throw Error(ErrorCode::kDomain, "format required for discrete-constellation curves");
    require_format(*m);
  } else {
    m.reset();
  }
  RateCurve curve{family, m, {}};
  const int n = static_cast<int>(std::floor((snr_db_hi - snr_db_lo) / step_db + 1e-9)) + 1;
  double running = 0.0;
  for (int i = 0; i < n; ++i) {
    const double db = snr_db_lo + i * step_db;
    double se = family_rate(family, m.value_or(2), db_to_linear(db));
    running = std::max(running, se);
    curve.points.push_back({db, running});
  }
  return curve;
}

std::vector<Crossing> find_crossings(RateFamily family) {
  if (family == RateFamily::kCapacity) {
    throw Error(ErrorCode::kDomain, "crossings are defined between discrete formats only");
  }
  std::vector<Crossing> out;
  for (int m = kMinBitsPerSymbol; m < kMaxBitsPerSymbol; m += 2) {
    const auto gap = [&](double db) {
      const double snr = db_to_linear(db);
      return family_rate(family, m, snr) - family_rate(family, m + 2, snr);
    };
    Crossing c{m, m + 2, std::nullopt};
    double prev_db = kCrossingScanFromDb;
    double prev = gap(prev_db);
    for (double db = prev_db + kBracketStepDb; db <= kSearchTopDb + 1e-9; db += kBracketStepDb) {
      const double cur = gap(db);
      if (prev > 0.0 && cur <= 0.0) {
        c.snr_db = bisect_db(prev_db, db, [&](double x) { return gap(x) <= 0.0; });
        break;
      }
      prev = cur;
      prev_db = db;
    }
    out.push_back(c);
  }
  return out;
}

double snr_threshold(RateFamily family, int m, double rc) {
  if (!(rc > 0.0 && rc < 1.0)) throw Error(ErrorCode::kDomain, "code rate must lie in (0, 1)");
  if (family != RateFamily::kCapacity) require_format(m);
  const double target = 2.0 * m * rc;
  const auto ok = [&](double db) { return family_rate(family, m, db_to_linear(db)) >= target; };
  if (ok(kThresholdFloorDb)) return kThresholdFloorDb;
  for (double db = kThresholdFloorDb + kBracketStepDb; db <= kSearchTopDb + 1e-9;
       db += kBracketStepDb) {
    if (ok(db)) return bisect_db(db - kBracketStepDb, db, ok);
  }
  throw Error(ErrorCode::kUnreachable, "rate " + std::to_string(target) +
                                           " bit/sym not reachable below 40 dB");
}

RateTable::RateTable(RateFamily family) : family_(family) {
  const int n = grid_size();
  const std::size_t n_formats = family == RateFamily::kCapacity ? 1 : 5;
  knots_.assign(n_formats, std::vector<double>(n, 0.0));
  for (std::size_t f = 0; f < n_formats; ++f) {
    const int m = static_cast<int>(2 * (f + 1));
    double running = 0.0;
    for (int i = 0; i < n; ++i) {
      running = std::max(running, family_rate(family, m, db_to_linear(grid_db(i))));
      knots_[f][i] = running;
    }
  }
}

const RateTable& RateTable::shared(RateFamily family) {
  switch (family) {
    case RateFamily::kCapacity: {
      static const RateTable t(RateFamily::kCapacity);
      return t;
    }
    case RateFamily::kHd: {
      static const RateTable t(RateFamily::kHd);
      return t;
    }
    case RateFamily::kSdGmi: {
      static const RateTable t(RateFamily::kSdGmi);
      return t;
    }
    case RateFamily::kMi: {
      static const RateTable t(RateFamily::kMi);
      return t;
    }
  }
  throw Error(ErrorCode::kDomain, "unknown rate family");
}

double RateTable::rate(int m, double snr) const {
  if (family_ != RateFamily::kCapacity) require_format(m);
  if (snr <= 0.0) return 0.0;
  const double db = linear_to_db(snr);
  if (db < kGridLoDb || db > kGridHiDb) return family_rate(family_, m, snr);
  const auto& k = knots_[family_ == RateFamily::kCapacity ? 0 : format_index(m)];
  const double pos = (db - kGridLoDb) / kGridStepDb;
  const auto i = std::min(static_cast<std::size_t>(pos), k.size() - 2);
  const double frac = pos - static_cast<double>(i);
  return k[i] + frac * (k[i + 1] - k[i]);
}

RateEnvelope::RateEnvelope(const RateTable& table, int m_max) : table_(&table), m_max_(m_max) {
  if (table.family() != RateFamily::kCapacity) require_format(m_max);
}

EnvelopePoint RateEnvelope::operator()(double snr) const {
  if (table_->family() == RateFamily::kCapacity) return {0, table_->rate(0, snr)};
  EnvelopePoint best{kMinBitsPerSymbol, table_->rate(kMinBitsPerSymbol, snr)};
  for (int m = kMinBitsPerSymbol + 2; m <= m_max_; m += 2) {
    const double se = table_->rate(m, snr);
    if (se > best.se) best = {m, se};
  }
  return best;
}

RateEnvelope rate_envelope(RateFamily family, int m_max) {
  return RateEnvelope(RateTable::shared(family), m_max);
}

}  // namespace netfec

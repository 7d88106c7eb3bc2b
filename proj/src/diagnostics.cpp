#include "smc/diagnostics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "smc/features.hpp"
#include "smc/numeric.hpp"
#include "smc/rng.hpp"

namespace smc {

namespace {

AcfPanel make_panel(std::string name, std::span<const double> x, std::span<const double> z,
                    Transform f, Transform g, std::size_t max_lag, std::size_t band_n) {
  AcfPanel panel;
  panel.name = std::move(name);
  panel.target_values = correlation_curve(x, f, g, max_lag);
  panel.surrogate_values = correlation_curve(z, f, g, max_lag);
  panel.lags.resize(max_lag);
  panel.band.resize(max_lag);
  for (std::size_t tau = 1; tau <= max_lag; ++tau) {
    panel.lags[tau - 1] = tau;
    panel.band[tau - 1] = confidence_band_99(band_n, tau);
  }
  return panel;
}

}  // namespace

std::array<AcfPanel, 3> acf_panels(std::span<const double> x, std::span<const double> z,
                                   std::size_t L, std::size_t K) {
  if (L < 1 || K < 1) throw std::invalid_argument("panel lags must be >= 1");
  if (L >= x.size() || L >= z.size() || K >= x.size() || K >= z.size()) {
    throw std::invalid_argument("panel lags must be smaller than both series");
  }
  const std::size_t band_n = std::min(x.size(), z.size());
  return {
      make_panel("acf_abs", x, z, Transform::absolute, Transform::absolute, K, band_n),
      make_panel("acf_lev", x, z, Transform::centered, Transform::absolute, L, band_n),
      make_panel("acf_ret", x, z, Transform::centered, Transform::centered, L, band_n),
  };
}

std::vector<double> ar1_generate(double p, std::size_t n, std::uint64_t seed,
                                 std::size_t burn_in) {
  if (!(std::abs(p) < 1.0)) throw std::invalid_argument("|p| must be < 1");
  if (n < 1) throw std::invalid_argument("n must be >= 1");

  Rng rng(seed);
  double z = 0.0;
  if (burn_in > 0) {
    z = rng.normal();
    for (std::size_t t = 0; t < burn_in; ++t) z = p * z + rng.normal();
  } else {
    // Stationary start: variance 1 / (1 - p^2).
    z = rng.normal() / std::sqrt(1.0 - p * p);
  }

  std::vector<double> out(n);
  out[0] = z;
  for (std::size_t t = 1; t < n; ++t) out[t] = p * out[t - 1] + rng.normal();
  return out;
}

std::vector<double> sine_generate(double period, std::size_t n) {
  if (!(period >= 2.0)) throw std::invalid_argument("period must be >= 2");
  if (static_cast<double>(n) < period) throw std::invalid_argument("need at least one period");
  std::vector<double> out(n);
  for (std::size_t t = 0; t < n; ++t) {
    out[t] = std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / period);
  }
  return out;
}

PhaseDiagram phase_diagram(std::span<const double> z, std::size_t lag) {
  if (lag < 1 || lag >= z.size()) throw std::invalid_argument("lag out of range");
  PhaseDiagram pd;
  pd.lag = lag;
  pd.points.reserve(z.size() - lag);
  for (std::size_t t = 0; t + lag < z.size(); ++t) {
    pd.points.emplace_back(z[t], z[t + lag]);
  }
  return pd;
}

PeriodStats period_average(std::span<const double> z, std::size_t period) {
  if (period < 1) throw std::invalid_argument("period must be >= 1");
  const std::size_t cycles = z.size() / period;
  if (cycles < 2) throw std::invalid_argument("need at least 2 complete periods");

  PeriodStats stats;
  stats.mean.assign(period, 0.0);
  stats.sd.assign(period, 0.0);
  for (std::size_t k = 0; k < period; ++k) {
    double sum = 0.0;
    for (std::size_t c = 0; c < cycles; ++c) sum += z[c * period + k];
    const double mean = sum / static_cast<double>(cycles);
    double ss = 0.0;
    for (std::size_t c = 0; c < cycles; ++c) {
      const double d = z[c * period + k] - mean;
      ss += d * d;
    }
    stats.mean[k] = mean;
    stats.sd[k] = std::sqrt(ss / static_cast<double>(cycles - 1));
  }
  return stats;
}

}  // namespace smc

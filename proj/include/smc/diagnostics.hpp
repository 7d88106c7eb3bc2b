#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace smc {

struct AcfPanel {
  std::string name;  // acf_abs, acf_lev, acf_ret
  std::vector<std::size_t> lags;
  std::vector<double> target_values;
  std::vector<double> surrogate_values;
  std::vector<double> band;  // 99% white-noise band per lag
};

// The three stylized-fact panels: absolute-return autocorrelation (lags 1..K),
// return/absolute-return cross-correlation (1..L), return autocorrelation
// (1..L). Both series are mean-removed internally.
std::array<AcfPanel, 3> acf_panels(std::span<const double> x, std::span<const double> z,
                                   std::size_t L, std::size_t K);

// z_t = p z_{t-1} + eps_t with standard-normal innovations; z_0 drawn from
// the stationary distribution unless a burn-in is requested.
std::vector<double> ar1_generate(double p, std::size_t n, std::uint64_t seed,
                                 std::size_t burn_in = 0);

// y[t] = sin(2 pi t / period), t = 0..n-1.
std::vector<double> sine_generate(double period, std::size_t n);

struct PhaseDiagram {
  std::vector<std::pair<double, double>> points;  // (z_t, z_{t+lag})
  std::size_t lag = 1;
};

PhaseDiagram phase_diagram(std::span<const double> z, std::size_t lag);

struct PeriodStats {
  std::vector<double> mean;
  std::vector<double> sd;
};

// Pointwise mean and standard deviation across complete periods.
PeriodStats period_average(std::span<const double> z, std::size_t period);

}  // namespace smc

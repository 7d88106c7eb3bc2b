#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "smc/ingest.hpp"

namespace smc {

// Plotting-position offset: cdf_levels[i] = (i + offset) / N. The midpoint
// convention keeps every level strictly inside (0,1), which pins down the
// truncation behaviour at both tails.
inline constexpr double kPlottingPositionOffset = 0.5;

// Sorted sample values paired with their CDF levels. Immutable after fitting
// and shareable across threads.
struct EmpiricalDistribution {
  std::vector<double> sorted_values;
  std::vector<double> cdf_levels;

  [[nodiscard]] double min() const { return sorted_values.front(); }
  [[nodiscard]] double max() const { return sorted_values.back(); }
  [[nodiscard]] std::size_t size() const { return sorted_values.size(); }
};

struct SampleDraw {
  std::vector<double> values;
  std::uint64_t seed = 0;
  std::size_t n = 0;
};

EmpiricalDistribution fit_empirical_cdf(std::span<const double> values);
EmpiricalDistribution fit_empirical_cdf(const ReturnSeries& r);

// Piecewise-linear quantile lookup. u at a knot level returns that knot's
// value exactly; u beyond the outermost levels truncates to the historical
// min/max.
double inverse_transform(const EmpiricalDistribution& d, double u);

// n i.i.d. draws through the inverse transform; deterministic given the seed.
SampleDraw sample_iid(const EmpiricalDistribution& d, std::size_t n, std::uint64_t seed);

// Mountain plot: (x, CDF(x)) for x <= 0 and (x, 1 - CDF(x)) for x > 0,
// ordered by x.
std::vector<std::pair<double, double>> folded_cdf(const EmpiricalDistribution& d);

// Largest gap between the sample's empirical CDF and the fitted levels,
// evaluated at the knots.
double ks_distance(const EmpiricalDistribution& d, std::span<const double> sample);

}  // namespace smc

#include "smc/empirical_dist.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "smc/rng.hpp"

namespace smc {

EmpiricalDistribution fit_empirical_cdf(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) throw std::invalid_argument("need at least 2 observations to fit a CDF");
  for (double v : values) {
    if (!std::isfinite(v)) throw std::domain_error("non-finite value in CDF fit input");
  }
  EmpiricalDistribution d;
  d.sorted_values.assign(values.begin(), values.end());
  std::sort(d.sorted_values.begin(), d.sorted_values.end());
  d.cdf_levels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    d.cdf_levels[i] = (static_cast<double>(i) + kPlottingPositionOffset) / static_cast<double>(n);
  }
  return d;
}

EmpiricalDistribution fit_empirical_cdf(const ReturnSeries& r) {
  return fit_empirical_cdf(std::span<const double>(r.values));
}

double inverse_transform(const EmpiricalDistribution& d, double u) {
  if (!(u >= 0.0 && u <= 1.0)) throw std::invalid_argument("u must lie in [0, 1]");
  const auto& levels = d.cdf_levels;
  const auto& values = d.sorted_values;
  if (u <= levels.front()) return values.front();
  if (u >= levels.back()) return values.back();
  // First level strictly above u; the knot before it anchors the segment.
  const auto it = std::upper_bound(levels.begin(), levels.end(), u);
  const std::size_t k = static_cast<std::size_t>(it - levels.begin()) - 1;
  const double t = (u - levels[k]) / (levels[k + 1] - levels[k]);
  return values[k] + t * (values[k + 1] - values[k]);
}

SampleDraw sample_iid(const EmpiricalDistribution& d, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("sample size must be >= 1");
  SampleDraw draw;
  draw.seed = seed;
  draw.n = n;
  draw.values.resize(n);
  Rng rng(seed);
  for (std::size_t k = 0; k < n; ++k) {
    draw.values[k] = inverse_transform(d, rng.uniform01());
  }
  return draw;
}

std::vector<std::pair<double, double>> folded_cdf(const EmpiricalDistribution& d) {
  std::vector<std::pair<double, double>> out;
  out.reserve(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double x = d.sorted_values[i];
    const double level = d.cdf_levels[i];
    out.emplace_back(x, x <= 0.0 ? level : 1.0 - level);
  }
  return out;
}

double ks_distance(const EmpiricalDistribution& d, std::span<const double> sample) {
  if (sample.empty()) throw std::invalid_argument("empty sample");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto it = std::upper_bound(sorted.begin(), sorted.end(), d.sorted_values[i]);
    const double frac =
        static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
    worst = std::max(worst, std::abs(frac - d.cdf_levels[i]));
  }
  return worst;
}

}  // namespace smc

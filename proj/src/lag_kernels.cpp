#include "smc/lag_kernels.hpp"

#include <cassert>
#include <cstdint>

namespace smc::kernels {

namespace {

inline double one_lag_sum(std::span<const double> f, std::span<const double> g,
                          std::size_t tau, bool circular) {
  const std::size_t n = f.size();
  double sum = 0.0;
  if (circular) {
    // g index wraps: t - tau mod n.
    std::size_t s = n - tau;
    for (std::size_t t = 0; t < n; ++t) {
      sum += f[t] * g[s];
      if (++s == n) s = 0;
    }
  } else {
    for (std::size_t t = tau; t < n; ++t) sum += f[t] * g[t - tau];
  }
  return sum;
}

}  // namespace

void lagged_product_sums_serial(std::span<const double> f, std::span<const double> g,
                                std::size_t max_lag, bool circular, std::span<double> out) {
  assert(f.size() == g.size());
  assert(out.size() >= max_lag);
  for (std::size_t tau = 1; tau <= max_lag; ++tau) {
    out[tau - 1] = one_lag_sum(f, g, tau, circular);
  }
}

void lagged_product_sums_parallel(std::span<const double> f, std::span<const double> g,
                                  std::size_t max_lag, bool circular, std::span<double> out) {
  assert(f.size() == g.size());
  assert(out.size() >= max_lag);
  const std::int64_t lags = static_cast<std::int64_t>(max_lag);
#pragma omp parallel for schedule(static)
  for (std::int64_t lag = 1; lag <= lags; ++lag) {
    out[static_cast<std::size_t>(lag) - 1] =
        one_lag_sum(f, g, static_cast<std::size_t>(lag), circular);
  }
}

void lagged_product_sums(std::span<const double> f, std::span<const double> g,
                         std::size_t max_lag, bool circular, std::span<double> out) {
  // Thread startup only pays off for batch-sized work.
  const bool big = f.size() * max_lag >= (1u << 20);
  if (openmp_enabled() && big) {
    lagged_product_sums_parallel(f, g, max_lag, circular, out);
  } else {
    lagged_product_sums_serial(f, g, max_lag, circular, out);
  }
}

bool openmp_enabled() {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

}  // namespace smc::kernels

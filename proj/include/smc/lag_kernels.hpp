#pragma once

#include <cstddef>
#include <span>

namespace smc::kernels {

// out[tau - 1] = sum_{t = tau}^{N-1} f[t] * g[t - tau] for tau = 1..max_lag.
// The circular variant wraps instead: sum_{t = 0}^{N-1} f[t] * g[(t - tau) mod N].
void lagged_product_sums_serial(std::span<const double> f, std::span<const double> g,
                                std::size_t max_lag, bool circular, std::span<double> out);

// Same contract, parallel over lags. Each lag is accumulated by a single
// thread in serial order, so the output is bit-identical to the serial kernel.
void lagged_product_sums_parallel(std::span<const double> f, std::span<const double> g,
                                  std::size_t max_lag, bool circular, std::span<double> out);

// Dispatches to the parallel kernel when OpenMP is compiled in and the work
// is large enough to amortize thread startup.
void lagged_product_sums(std::span<const double> f, std::span<const double> g,
                         std::size_t max_lag, bool circular, std::span<double> out);

bool openmp_enabled();

}  // namespace smc::kernels

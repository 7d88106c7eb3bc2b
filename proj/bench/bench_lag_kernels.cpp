// Timings for the batch lag-sum kernels (serial vs OpenMP) and for the
// incremental swap evaluation against a naive full recompute.

#include <chrono>
#include <cstdio>
#include <vector>

#include "smc/features.hpp"
#include "smc/lag_kernels.hpp"
#include "smc/numeric.hpp"
#include "smc/rng.hpp"

using namespace smc;

namespace {

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

template <typename F>
double time_best_of(int reps, F&& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const double t0 = now_seconds();
    fn();
    best = std::min(best, now_seconds() - t0);
  }
  return best;
}

}  // namespace

int main() {
  std::printf("OpenMP compiled in: %s\n\n", kernels::openmp_enabled() ? "yes" : "no");

  // Batch kernel: serial reference vs parallel, identical outputs required.
  {
    const std::size_t n = 20'000;
    const std::size_t max_lag = 240;  // the L=40, K=200 workload per term pair
    Rng rng(1);
    std::vector<double> f(n);
    for (auto& v : f) v = rng.normal();
    std::vector<double> serial(max_lag);
    std::vector<double> parallel(max_lag);

    const double t_serial = time_best_of(5, [&] {
      kernels::lagged_product_sums_serial(f, f, max_lag, false, serial);
    });
    const double t_parallel = time_best_of(5, [&] {
      kernels::lagged_product_sums_parallel(f, f, max_lag, false, parallel);
    });
    const bool identical = serial == parallel;
    const double flops = 2.0 * static_cast<double>(n) * static_cast<double>(max_lag);
    std::printf("lagged product sums, N=%zu, lags=%zu\n", n, max_lag);
    std::printf("  serial   %8.3f ms  (%.2f GFLOP/s)\n", 1e3 * t_serial,
                flops / t_serial / 1e9);
    std::printf("  parallel %8.3f ms  (%.2f GFLOP/s)  speedup %.2fx  bit-identical: %s\n\n",
                1e3 * t_parallel, flops / t_parallel / 1e9, t_serial / t_parallel,
                identical ? "yes" : "NO");
  }

  // Swap evaluation: O(lags) incremental path vs full recompute per proposal.
  {
    const std::size_t n = 10'000;
    Rng rng(2);
    std::vector<double> z(n);
    for (auto& v : z) v = rng.normal();
    const double m = sorted_mean(z);
    for (auto& v : z) v -= m;

    const FeatureSpec spec = FeatureSpec::sp500_preset(10, 50);
    const FeatureVector target = rho(z, spec);
    std::vector<double> draw(n);
    for (auto& v : draw) v = rng.normal();
    const double md = sorted_mean(draw);
    for (auto& v : draw) v -= md;
    ObjectiveState state = init_objective_state(draw, target, spec);

    const int proposals = 200'000;
    SwapUpdate upd;
    const double t_incremental = time_best_of(3, [&] {
      Rng prng(3);
      for (int k = 0; k < proposals; ++k) {
        const std::size_t i = prng.uniform_index(n);
        std::size_t j = prng.uniform_index(n - 1);
        if (j >= i) ++j;
        swap_delta(state, i, j, upd);
      }
    });

    const int full_reps = 50;
    std::vector<double> tmp = draw;
    const double t_full = time_best_of(3, [&] {
      Rng prng(4);
      for (int k = 0; k < full_reps; ++k) {
        const std::size_t i = prng.uniform_index(n);
        std::size_t j = prng.uniform_index(n - 1);
        if (j >= i) ++j;
        std::swap(tmp[i], tmp[j]);
        const FeatureVector cand = rho(tmp, spec);
        objective_delta(target, cand, spec);
        std::swap(tmp[i], tmp[j]);
      }
    });

    const double inc_rate = proposals / t_incremental;
    const double full_rate = full_reps / t_full;
    std::printf("swap evaluation, N=%zu, four terms L=10 K=50 (120 entries)\n", n);
    std::printf("  incremental  %10.0f proposals/s\n", inc_rate);
    std::printf("  full rebuild %10.0f proposals/s  (incremental is %.0fx faster)\n",
                full_rate, inc_rate / full_rate);
  }
  return 0;
}

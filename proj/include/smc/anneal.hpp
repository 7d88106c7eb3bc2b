#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "smc/empirical_dist.hpp"
#include "smc/features.hpp"

namespace smc {

// Returned by the temperature calibration when no uphill probe exists.
inline constexpr double kTemperatureFloor = 1e-12;

struct AnnealConfig {
  std::optional<double> initial_temp;  // unset: calibrated from uphill probes
  double cooling_factor = 0.9;
  std::size_t max_success = 0;  // accepted swaps per temperature stage; 0 -> 2N
  std::size_t max_total = 0;    // proposals per temperature stage; 0 -> 20N
  double goal = 0.0;            // terminate when delta <= goal
  std::vector<double> band_goal;  // per-entry tolerances; terminate when all met
  std::size_t max_iterations = 100'000'000;
  double remelt_factor = 10.0;
  std::uint64_t seed = 0;
  std::size_t log_every = 100'000;     // trajectory/progress cadence
  std::size_t temp_probes = 1'000;     // probes for the auto temperature
  std::size_t refresh_every = 1'000'000;  // drift-control recompute cadence

  void validate() const;
  [[nodiscard]] std::size_t stage_success(std::size_t n) const {
    return max_success ? max_success : 2 * n;
  }
  [[nodiscard]] std::size_t stage_total(std::size_t n) const {
    return max_total ? max_total : 20 * n;
  }
};

enum class Termination { goal, max_iterations, frozen };

const char* to_string(Termination t);

struct TrajectoryPoint {
  std::size_t iteration = 0;
  double delta = 0.0;
  double best_delta = 0.0;
  double temperature = 0.0;
};

struct ProgressEvent {
  std::size_t realization = 0;
  std::size_t iteration = 0;
  double delta = 0.0;
  double temperature = 0.0;
};
using ProgressFn = std::function<void(const ProgressEvent&)>;

struct AnnealReport {
  std::vector<double> final_series;  // multiset-equal to the initial draw, bit-exact
  double final_delta = 0.0;
  std::size_t iterations = 0;
  std::size_t accepted = 0;
  std::vector<TrajectoryPoint> trajectory;
  Termination terminated_by = Termination::max_iterations;
  std::uint64_t seed = 0;
  double initial_temp_used = 0.0;
  AnnealConfig config;
};

// Metropolis rule as a pure function of the uniform variate: downhill moves
// always accepted, uphill with probability exp(-(proposed - current)/T).
bool metropolis_accept(double current, double proposed, double temperature, double uniform);

// Temperature at which the median uphill probe move is accepted with
// probability 1/2: T0 = median(positive delta) / ln 2. Falls back to
// kTemperatureFloor when no probe goes uphill.
double auto_initial_temperature(const ObjectiveState& state, std::size_t probes,
                                std::uint64_t seed);

// One annealing chain over pairwise swaps of the initial draw. Deterministic
// given (inputs, cfg, seed). In correlation modes the draw is mean-removed
// internally; final_series stays in the draw's original units.
AnnealReport anneal_run(std::span<const double> initial, const FeatureVector& target,
                        const FeatureSpec& spec, const AnnealConfig& cfg,
                        const ProgressFn& progress = {}, std::size_t realization = 0);

// count independent chains; chain k draws its own sample and anneals with
// seeds derived from base_seed via derive_stream. Results are ordered by
// realization index regardless of scheduling.
std::vector<AnnealReport> run_realizations(std::size_t count, std::uint64_t base_seed,
                                           const EmpiricalDistribution& dist,
                                           std::size_t draw_n, const FeatureVector& target,
                                           const FeatureSpec& spec, const AnnealConfig& cfg,
                                           const ProgressFn& progress = {});

}  // namespace smc

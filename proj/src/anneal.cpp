#include "smc/anneal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "smc/numeric.hpp"
#include "smc/rng.hpp"

namespace smc {

void AnnealConfig::validate() const {
  if (!(cooling_factor > 0.0 && cooling_factor < 1.0)) {
    throw std::invalid_argument("cooling_factor must lie in (0, 1)");
  }
  if (max_success && max_total && max_success > max_total) {
    throw std::invalid_argument("max_success must not exceed max_total");
  }
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
  if (!(remelt_factor > 1.0)) throw std::invalid_argument("remelt_factor must exceed 1");
  if (goal < 0.0) throw std::invalid_argument("goal must be >= 0");
  if (initial_temp && !(*initial_temp >= 0.0)) {
    throw std::invalid_argument("initial_temp must be >= 0");
  }
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::goal: return "goal";
    case Termination::max_iterations: return "max_iterations";
    default: return "frozen";
  }
}

bool metropolis_accept(double current, double proposed, double temperature, double uniform) {
  if (proposed <= current) return true;
  if (temperature <= 0.0) return false;
  return uniform < std::exp(-(proposed - current) / temperature);
}

double auto_initial_temperature(const ObjectiveState& state, std::size_t probes,
                                std::uint64_t seed) {
  if (probes < 2) throw std::invalid_argument("need at least 2 probes");
  const std::size_t n = state.size();
  if (n < 2) throw std::invalid_argument("series too short to probe");

  Rng rng(seed);
  SwapUpdate upd;
  std::vector<double> uphill;
  uphill.reserve(probes);
  for (std::size_t p = 0; p < probes; ++p) {
    const std::size_t i = rng.uniform_index(n);
    std::size_t j = rng.uniform_index(n - 1);
    if (j >= i) ++j;
    swap_delta(state, i, j, upd);
    const double rise = upd.new_delta - state.delta();
    if (rise > 0.0) uphill.push_back(rise);
  }
  if (uphill.empty()) return kTemperatureFloor;

  std::sort(uphill.begin(), uphill.end());
  const std::size_t mid = uphill.size() / 2;
  const double median = uphill.size() % 2 == 1
                            ? uphill[mid]
                            : 0.5 * (uphill[mid - 1] + uphill[mid]);
  // exp(-median / T0) = 1/2
  return median / std::numbers::ln2;
}

namespace {

bool goal_met(const ObjectiveState& state, const AnnealConfig& cfg) {
  if (state.delta() <= cfg.goal) return true;
  return state.within_tolerances();
}

}  // namespace

AnnealReport anneal_run(std::span<const double> initial, const FeatureVector& target,
                        const FeatureSpec& spec, const AnnealConfig& cfg,
                        const ProgressFn& progress, std::size_t realization) {
  cfg.validate();
  const std::size_t n = initial.size();
  if (n < 2) throw std::invalid_argument("initial draw must hold at least 2 values");

  // The raw draw is only ever permuted, so the final series is multiset-equal
  // to the input bit for bit. Correlation objectives see the mean-removed
  // copy; the mean is permutation-invariant, so both stay aligned.
  std::vector<double> raw(initial.begin(), initial.end());
  std::vector<double> working = raw;
  if (spec.is_correlation()) {
    const double m = sorted_mean(working);
    for (double& v : working) v -= m;
  }

  ObjectiveState state = init_objective_state(std::move(working), target, spec, cfg.band_goal);
  state.set_refresh_cadence(cfg.refresh_every);

  AnnealReport report;
  report.seed = cfg.seed;
  report.config = cfg;

  double temperature = cfg.initial_temp
                           ? *cfg.initial_temp
                           : auto_initial_temperature(state, cfg.temp_probes,
                                                      derive_stream(cfg.seed, 1));
  report.initial_temp_used = temperature;

  double best = state.delta();
  report.trajectory.push_back({0, state.delta(), best, temperature});

  if (goal_met(state, cfg)) {
    report.final_series = std::move(raw);
    report.final_delta = state.delta();
    report.terminated_by = Termination::goal;
    return report;
  }

  Rng rng(derive_stream(cfg.seed, 0));
  SwapUpdate upd;
  const std::size_t stage_success = cfg.stage_success(n);
  const std::size_t stage_total = cfg.stage_total(n);

  std::size_t iterations = 0;
  std::size_t accepted = 0;
  std::size_t stage_accepted = 0;
  std::size_t stage_proposed = 0;
  bool previous_stage_frozen = false;
  bool reached_goal = false;

  while (iterations < cfg.max_iterations) {
    ++iterations;
    ++stage_proposed;

    const std::size_t i = rng.uniform_index(n);
    std::size_t j = rng.uniform_index(n - 1);
    if (j >= i) ++j;
    swap_delta(state, i, j, upd);
    const double u = rng.uniform01();
    if (metropolis_accept(state.delta(), upd.new_delta, temperature, u)) {
      apply_swap(state, upd);
      std::swap(raw[i], raw[j]);
      ++accepted;
      ++stage_accepted;
      best = std::min(best, state.delta());
      if (goal_met(state, cfg)) {
        reached_goal = true;
      }
    }

    if (cfg.log_every > 0 && iterations % cfg.log_every == 0) {
      report.trajectory.push_back({iterations, state.delta(), best, temperature});
      if (progress) progress({realization, iterations, state.delta(), temperature});
    }
    if (reached_goal) break;

    if (stage_accepted >= stage_success || stage_proposed >= stage_total) {
      if (stage_accepted == 0) {
        if (previous_stage_frozen) {
          report.terminated_by = Termination::frozen;
          break;
        }
        previous_stage_frozen = true;
        temperature *= cfg.remelt_factor;
      } else {
        previous_stage_frozen = false;
        temperature *= cfg.cooling_factor;
      }
      stage_accepted = 0;
      stage_proposed = 0;
    }
  }

  if (reached_goal) {
    report.terminated_by = Termination::goal;
  } else if (report.terminated_by != Termination::frozen) {
    report.terminated_by = Termination::max_iterations;
  }

  report.iterations = iterations;
  report.accepted = accepted;
  report.trajectory.push_back({iterations, state.delta(), best, temperature});
  report.final_series = std::move(raw);
  report.final_delta = state.delta();
  return report;
}

std::vector<AnnealReport> run_realizations(std::size_t count, std::uint64_t base_seed,
                                           const EmpiricalDistribution& dist,
                                           std::size_t draw_n, const FeatureVector& target,
                                           const FeatureSpec& spec, const AnnealConfig& cfg,
                                           const ProgressFn& progress) {
  if (count < 1) throw std::invalid_argument("need at least one realization");

  std::vector<AnnealReport> reports(count);
  std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic)
  for (std::int64_t k = 0; k < static_cast<std::int64_t>(count); ++k) {
    try {
      const std::uint64_t chain_seed = derive_stream(base_seed, static_cast<std::uint64_t>(k));
      const SampleDraw draw = sample_iid(dist, draw_n, derive_stream(chain_seed, 0));
      AnnealConfig chain_cfg = cfg;
      chain_cfg.seed = derive_stream(chain_seed, 1);
      ProgressFn chain_progress;
      if (progress) {
        chain_progress = [&progress](const ProgressEvent& ev) {
#pragma omp critical(smc_progress)
          progress(ev);
        };
      }
      reports[static_cast<std::size_t>(k)] =
          anneal_run(draw.values, target, spec, chain_cfg, chain_progress,
                     static_cast<std::size_t>(k));
    } catch (...) {
#pragma omp critical(smc_failure)
      if (!failure) failure = std::current_exception();
    }
  }

  if (failure) std::rethrow_exception(failure);
  return reports;
}

}  // namespace smc

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace smc {

// Pointwise transforms entering the correlation functional. They act on the
// mean-removed series: centered is the value itself, absolute and square are
// |value| and value^2 of the centered series.
enum class Transform { centered, absolute, square };

enum class ObjectiveMode {
  per_lag_l1,     // sum of weighted per-lag absolute discrepancies (default)
  paper_literal,  // |sum(target entries) - sum(candidate entries)|, cancellation allowed
  target_series,  // mean squared difference against a fixed deterministic series
};

struct FeatureTerm {
  Transform f = Transform::centered;
  Transform g = Transform::centered;
  std::size_t max_lag = 1;
  double weight = 1.0;
};

// Declarative description of the feature vector rho: either a list of lagged
// correlation terms, or (target-series mode) a fixed series the candidate is
// matched against pointwise.
struct FeatureSpec {
  std::vector<FeatureTerm> terms;
  ObjectiveMode mode = ObjectiveMode::per_lag_l1;
  std::vector<double> target_series;  // only in target_series mode
  bool circular = false;              // periodic boundaries in the estimator

  [[nodiscard]] bool is_correlation() const { return mode != ObjectiveMode::target_series; }
  [[nodiscard]] std::size_t entry_count() const;
  void validate(std::size_t series_length) const;

  // The four stylized-fact terms: return autocorrelation and leverage up to
  // lag L, absolute and squared volatility clustering up to lag K.
  static FeatureSpec sp500_preset(std::size_t L = 40, std::size_t K = 200);
  // Single centered autocorrelation term up to max_lag.
  static FeatureSpec acf_spec(std::size_t max_lag);
  static FeatureSpec target_spec(std::vector<double> target);
};

// Per-(term, lag) summands of rho, ordered by (term index, lag). In
// target-series mode this is the series itself.
struct FeatureVector {
  std::vector<double> entries;
};

std::string to_string(Transform t);
std::string to_string(ObjectiveMode m);
Transform transform_from_string(const std::string& s);
ObjectiveMode mode_from_string(const std::string& s);

FeatureSpec load_feature_spec(const std::filesystem::path& path);
void save_feature_spec(const FeatureSpec& spec, const std::filesystem::path& path);

// C_{f,g}(tau): lagged products averaged over the N - tau overlapping pairs,
// normalized by sqrt(<f^2>) sqrt(<g^2>) averaged over all N points. Lag 0 is
// permitted for diagnostics. Throws on a zero denominator.
double cross_correlation(std::span<const double> u, Transform f, Transform g,
                         std::size_t lag, bool circular = false);

// C_{f,g}(tau) for tau = 1..max_lag in one batched pass.
std::vector<double> correlation_curve(std::span<const double> u, Transform f, Transform g,
                                      std::size_t max_lag, bool circular = false);

FeatureVector rho(std::span<const double> u, const FeatureSpec& spec);

double objective_delta(const FeatureVector& target, const FeatureVector& candidate,
                       const FeatureSpec& spec);

// 99% white-noise band at one lag: 2.576 / sqrt(n - tau).
double confidence_band_99(std::size_t n, std::size_t tau);

// Per-entry band tolerances for a correlation spec on a series of length n.
std::vector<double> band_tolerances(const FeatureSpec& spec, std::size_t n);

// Result of evaluating one proposed swap. sum_deltas holds the per-(term,lag)
// numerator adjustments; it is only valid against the state version it was
// computed from.
struct SwapUpdate {
  std::size_t i = 0;
  std::size_t j = 0;
  std::uint64_t version = 0;
  double new_delta = 0.0;
  double new_tolerance_excess = 0.0;
  std::vector<double> sum_deltas;  // empty in target-series mode
};

// Objective bookkeeping for one annealing chain: the candidate series, its
// cached transforms, per-(term,lag) numerator sums and the fixed norms.
// A proposed swap is evaluated in O(total lags) arithmetic; norms and all
// single-point averages are permutation-invariant and never change.
class ObjectiveState {
 public:
  [[nodiscard]] double delta() const { return delta_; }
  [[nodiscard]] std::uint64_t version() const { return version_; }
  [[nodiscard]] std::size_t size() const { return series_.size(); }
  [[nodiscard]] const std::vector<double>& series() const { return series_; }
  [[nodiscard]] const FeatureSpec& spec() const { return spec_; }
  [[nodiscard]] const std::vector<double>& target_entries() const { return target_; }
  [[nodiscard]] const std::vector<double>& lag_sums() const { return lag_sums_; }
  [[nodiscard]] const std::vector<double>& norms() const { return norms_; }
  [[nodiscard]] std::size_t entry_count() const;

  [[nodiscard]] bool has_tolerances() const { return !tolerances_.empty(); }
  // max over entries of |target - candidate| - tolerance; <= 0 means every
  // discrepancy fits inside its band.
  [[nodiscard]] double tolerance_excess() const { return tolerance_excess_; }
  [[nodiscard]] bool within_tolerances() const {
    return has_tolerances() && tolerance_excess_ <= 0.0;
  }

  [[nodiscard]] FeatureVector current_features() const;

  // Recompute lag sums, delta and tolerance excess from the series. Bounds
  // floating-point drift on long runs; called automatically every
  // refresh_cadence accepted swaps.
  void refresh();
  void set_refresh_cadence(std::size_t accepted_swaps) { refresh_cadence_ = accepted_swaps; }

  friend ObjectiveState init_objective_state(std::vector<double> z, const FeatureVector& target,
                                             const FeatureSpec& spec,
                                             std::vector<double> entry_tolerances);
  friend void swap_delta(const ObjectiveState& state, std::size_t i, std::size_t j,
                         SwapUpdate& out);
  friend void apply_swap(ObjectiveState& state, const SwapUpdate& update);

 private:
  ObjectiveState() = default;
  void recompute_readouts();

  FeatureSpec spec_;
  std::vector<double> target_;       // target entries
  double target_weighted_sum_ = 0.0;  // for paper_literal
  std::vector<double> series_;       // z as given (mean-removed in correlation modes)
  std::vector<double> centered_;     // transform caches; only the needed ones are filled
  std::vector<double> absolute_;
  std::vector<double> square_;
  std::vector<double> lag_sums_;     // flat per entry
  std::vector<double> norms_;        // per term
  std::vector<double> inv_scale_;    // per entry: 1 / (pair count * term norm)
  std::vector<double> weights_;      // per entry
  std::vector<std::size_t> entry_lag_;
  std::vector<std::size_t> term_offset_;
  std::vector<double> tolerances_;   // optional per entry
  double delta_ = 0.0;
  double tolerance_excess_ = 0.0;
  std::uint64_t version_ = 0;
  std::size_t refresh_cadence_ = 1'000'000;
  std::size_t accepted_since_refresh_ = 0;
};

// Precondition in correlation modes: z mean-removed (the mean is permutation-
// invariant, so removing it once up front commutes with every later swap).
ObjectiveState init_objective_state(std::vector<double> z, const FeatureVector& target,
                                    const FeatureSpec& spec,
                                    std::vector<double> entry_tolerances = {});

// Objective value apply_swap(i, j) would produce, without mutating the state.
void swap_delta(const ObjectiveState& state, std::size_t i, std::size_t j, SwapUpdate& out);
SwapUpdate swap_delta(const ObjectiveState& state, std::size_t i, std::size_t j);

void apply_swap(ObjectiveState& state, const SwapUpdate& update);

}  // namespace smc

#include "smc/features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "json.hpp"
#include "smc/lag_kernels.hpp"
#include "smc/numeric.hpp"
#include "smc/table_io.hpp"

namespace smc {

namespace {

// Transforms of the mean-removed series, built once and reused across terms.
struct TransformCache {
  std::vector<double> centered;
  std::vector<double> absolute;
  std::vector<double> square;

  void build(std::span<const double> u, bool need_abs, bool need_sq) {
    const double m = sorted_mean(u);
    centered.resize(u.size());
    for (std::size_t t = 0; t < u.size(); ++t) centered[t] = u[t] - m;
    if (need_abs) {
      absolute.resize(u.size());
      for (std::size_t t = 0; t < u.size(); ++t) absolute[t] = std::abs(centered[t]);
    }
    if (need_sq) {
      square.resize(u.size());
      for (std::size_t t = 0; t < u.size(); ++t) square[t] = centered[t] * centered[t];
    }
  }

  [[nodiscard]] std::span<const double> get(Transform t) const {
    switch (t) {
      case Transform::centered: return centered;
      case Transform::absolute: return absolute;
      default: return square;
    }
  }
};

void needs(const FeatureSpec& spec, bool& need_abs, bool& need_sq) {
  need_abs = need_sq = false;
  for (const FeatureTerm& term : spec.terms) {
    for (Transform t : {term.f, term.g}) {
      if (t == Transform::absolute) need_abs = true;
      if (t == Transform::square) need_sq = true;
    }
  }
}

// sqrt(<f^2>) sqrt(<g^2>), accumulated in sorted order so the value is
// invariant under permutations of the series. For f == g the two square
// roots cancel and <f^2> is used directly.
double term_norm(std::span<const double> fv, std::span<const double> gv, Transform f,
                 Transform g, std::size_t n) {
  const double mf2 = sorted_sum_squares(fv) / static_cast<double>(n);
  double norm = 0.0;
  if (f == g) {
    norm = mf2;
  } else {
    const double mg2 = sorted_sum_squares(gv) / static_cast<double>(n);
    norm = std::sqrt(mf2) * std::sqrt(mg2);
  }
  if (!(norm > 0.0)) {
    throw std::domain_error("degenerate input: transform '" + to_string(f) + "'/'" +
                            to_string(g) + "' of the series has zero variance");
  }
  return norm;
}

}  // namespace

std::size_t FeatureSpec::entry_count() const {
  if (mode == ObjectiveMode::target_series) return target_series.size();
  std::size_t total = 0;
  for (const FeatureTerm& term : terms) total += term.max_lag;
  return total;
}

void FeatureSpec::validate(std::size_t series_length) const {
  if (mode == ObjectiveMode::target_series) {
    if (!terms.empty()) {
      throw std::invalid_argument("target-series mode does not take correlation terms");
    }
    if (target_series.empty()) {
      throw std::invalid_argument("target-series mode requires a target series");
    }
    if (series_length > 0 && target_series.size() != series_length) {
      throw std::invalid_argument("target series length " +
                                  std::to_string(target_series.size()) +
                                  " does not match candidate length " +
                                  std::to_string(series_length));
    }
    return;
  }
  if (terms.empty()) throw std::invalid_argument("feature spec has no terms");
  if (!target_series.empty()) {
    throw std::invalid_argument("correlation modes do not take a target series");
  }
  for (const FeatureTerm& term : terms) {
    if (term.max_lag < 1) throw std::invalid_argument("max_lag must be >= 1");
    if (series_length > 0 && term.max_lag >= series_length) {
      throw std::invalid_argument("max_lag " + std::to_string(term.max_lag) +
                                  " must be smaller than the series length " +
                                  std::to_string(series_length));
    }
    if (!(term.weight > 0.0)) throw std::invalid_argument("term weights must be positive");
  }
}

FeatureSpec FeatureSpec::sp500_preset(std::size_t L, std::size_t K) {
  FeatureSpec spec;
  spec.terms = {
      {Transform::centered, Transform::centered, L, 1.0},
      {Transform::centered, Transform::absolute, L, 1.0},
      {Transform::absolute, Transform::absolute, K, 1.0},
      {Transform::square, Transform::square, K, 1.0},
  };
  return spec;
}

FeatureSpec FeatureSpec::acf_spec(std::size_t max_lag) {
  FeatureSpec spec;
  spec.terms = {{Transform::centered, Transform::centered, max_lag, 1.0}};
  return spec;
}

FeatureSpec FeatureSpec::target_spec(std::vector<double> target) {
  FeatureSpec spec;
  spec.mode = ObjectiveMode::target_series;
  spec.target_series = std::move(target);
  return spec;
}

std::string to_string(Transform t) {
  switch (t) {
    case Transform::centered: return "centered";
    case Transform::absolute: return "absolute";
    default: return "square";
  }
}

std::string to_string(ObjectiveMode m) {
  switch (m) {
    case ObjectiveMode::per_lag_l1: return "per-lag-l1";
    case ObjectiveMode::paper_literal: return "paper-literal";
    default: return "target-series";
  }
}

Transform transform_from_string(const std::string& s) {
  if (s == "centered") return Transform::centered;
  if (s == "absolute") return Transform::absolute;
  if (s == "square") return Transform::square;
  throw std::invalid_argument("unknown transform '" + s + "'");
}

ObjectiveMode mode_from_string(const std::string& s) {
  if (s == "per-lag-l1") return ObjectiveMode::per_lag_l1;
  if (s == "paper-literal") return ObjectiveMode::paper_literal;
  if (s == "target-series") return ObjectiveMode::target_series;
  throw std::invalid_argument("unknown objective mode '" + s + "'");
}

FeatureSpec load_feature_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open spec file: " + path.string());
  nlohmann::json j;
  in >> j;

  FeatureSpec spec;
  if (j.contains("mode")) spec.mode = mode_from_string(j.at("mode").get<std::string>());
  if (j.contains("circular")) spec.circular = j.at("circular").get<bool>();
  if (j.contains("terms")) {
    for (const auto& jt : j.at("terms")) {
      FeatureTerm term;
      term.f = transform_from_string(jt.at("f").get<std::string>());
      term.g = transform_from_string(jt.at("g").get<std::string>());
      term.max_lag = jt.at("max_lag").get<std::size_t>();
      if (jt.contains("weight")) term.weight = jt.at("weight").get<double>();
      spec.terms.push_back(term);
    }
  }
  if (j.contains("target_series")) {
    spec.target_series = j.at("target_series").get<std::vector<double>>();
  } else if (j.contains("target_file")) {
    spec.target_series = read_series_file(j.at("target_file").get<std::string>());
  }
  spec.validate(0);
  return spec;
}

void save_feature_spec(const FeatureSpec& spec, const std::filesystem::path& path) {
  nlohmann::json j;
  j["mode"] = to_string(spec.mode);
  j["circular"] = spec.circular;
  j["terms"] = nlohmann::json::array();
  for (const FeatureTerm& term : spec.terms) {
    j["terms"].push_back({{"f", to_string(term.f)},
                          {"g", to_string(term.g)},
                          {"max_lag", term.max_lag},
                          {"weight", term.weight}});
  }
  if (!spec.target_series.empty()) j["target_series"] = spec.target_series;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write spec file: " + path.string());
  out << j.dump(2) << '\n';
}

double cross_correlation(std::span<const double> u, Transform f, Transform g,
                         std::size_t lag, bool circular) {
  const std::size_t n = u.size();
  if (n < 2) throw std::invalid_argument("series too short");
  if (lag >= n) throw std::invalid_argument("lag must be smaller than the series length");
  if (lag == 0 && f == g) return 1.0;  // numerator and denominator coincide

  TransformCache tc;
  tc.build(u, f == Transform::absolute || g == Transform::absolute,
           f == Transform::square || g == Transform::square);
  const auto fv = tc.get(f);
  const auto gv = tc.get(g);
  const double norm = term_norm(fv, gv, f, g, n);

  double sum = 0.0;
  if (circular) {
    for (std::size_t t = 0; t < n; ++t) sum += fv[t] * gv[(t + n - lag) % n];
  } else {
    for (std::size_t t = lag; t < n; ++t) sum += fv[t] * gv[t - lag];
  }
  const double pairs = static_cast<double>(circular ? n : n - lag);
  return (sum / pairs) / norm;
}

std::vector<double> correlation_curve(std::span<const double> u, Transform f, Transform g,
                                      std::size_t max_lag, bool circular) {
  const std::size_t n = u.size();
  if (max_lag < 1 || max_lag >= n) throw std::invalid_argument("max_lag out of range");

  TransformCache tc;
  tc.build(u, f == Transform::absolute || g == Transform::absolute,
           f == Transform::square || g == Transform::square);
  const auto fv = tc.get(f);
  const auto gv = tc.get(g);
  const double norm = term_norm(fv, gv, f, g, n);

  std::vector<double> sums(max_lag);
  kernels::lagged_product_sums(fv, gv, max_lag, circular, sums);
  for (std::size_t tau = 1; tau <= max_lag; ++tau) {
    const double pairs = static_cast<double>(circular ? n : n - tau);
    sums[tau - 1] = (sums[tau - 1] / pairs) / norm;
  }
  return sums;
}

FeatureVector rho(std::span<const double> u, const FeatureSpec& spec) {
  spec.validate(u.size());
  FeatureVector v;
  if (spec.mode == ObjectiveMode::target_series) {
    v.entries.assign(u.begin(), u.end());
    return v;
  }

  bool need_abs = false;
  bool need_sq = false;
  needs(spec, need_abs, need_sq);
  TransformCache tc;
  tc.build(u, need_abs, need_sq);

  const std::size_t n = u.size();
  v.entries.resize(spec.entry_count());
  std::size_t offset = 0;
  for (const FeatureTerm& term : spec.terms) {
    const auto fv = tc.get(term.f);
    const auto gv = tc.get(term.g);
    const double norm = term_norm(fv, gv, term.f, term.g, n);
    const std::span<double> out(v.entries.data() + offset, term.max_lag);
    kernels::lagged_product_sums(fv, gv, term.max_lag, spec.circular, out);
    for (std::size_t tau = 1; tau <= term.max_lag; ++tau) {
      const double pairs = static_cast<double>(spec.circular ? n : n - tau);
      out[tau - 1] = (out[tau - 1] / pairs) / norm;
    }
    offset += term.max_lag;
  }
  return v;
}

double objective_delta(const FeatureVector& target, const FeatureVector& candidate,
                       const FeatureSpec& spec) {
  if (target.entries.size() != candidate.entries.size()) {
    throw std::invalid_argument("feature vector sizes differ: " +
                                std::to_string(target.entries.size()) + " vs " +
                                std::to_string(candidate.entries.size()));
  }
  if (spec.mode == ObjectiveMode::target_series) {
    double acc = 0.0;
    for (std::size_t q = 0; q < target.entries.size(); ++q) {
      const double d = target.entries[q] - candidate.entries[q];
      acc += d * d;
    }
    return acc / static_cast<double>(target.entries.size());
  }

  if (target.entries.size() != spec.entry_count()) {
    throw std::invalid_argument("feature vector does not match the spec's entry count");
  }
  std::size_t q = 0;
  double acc = 0.0;
  double target_wsum = 0.0;
  double cand_wsum = 0.0;
  for (const FeatureTerm& term : spec.terms) {
    for (std::size_t tau = 1; tau <= term.max_lag; ++tau, ++q) {
      if (spec.mode == ObjectiveMode::per_lag_l1) {
        acc += term.weight * std::abs(target.entries[q] - candidate.entries[q]);
      } else {
        target_wsum += term.weight * target.entries[q];
        cand_wsum += term.weight * candidate.entries[q];
      }
    }
  }
  return spec.mode == ObjectiveMode::per_lag_l1 ? acc : std::abs(target_wsum - cand_wsum);
}

double confidence_band_99(std::size_t n, std::size_t tau) {
  if (tau >= n) throw std::invalid_argument("lag must be smaller than the series length");
  return 2.576 / std::sqrt(static_cast<double>(n - tau));
}

std::vector<double> band_tolerances(const FeatureSpec& spec, std::size_t n) {
  if (!spec.is_correlation()) {
    throw std::invalid_argument("band tolerances only apply to correlation objectives");
  }
  std::vector<double> tol;
  tol.reserve(spec.entry_count());
  for (const FeatureTerm& term : spec.terms) {
    for (std::size_t tau = 1; tau <= term.max_lag; ++tau) {
      tol.push_back(confidence_band_99(n, tau));
    }
  }
  return tol;
}

std::size_t ObjectiveState::entry_count() const {
  return spec_.mode == ObjectiveMode::target_series ? target_.size() : lag_sums_.size();
}

FeatureVector ObjectiveState::current_features() const {
  FeatureVector v;
  if (spec_.mode == ObjectiveMode::target_series) {
    v.entries = series_;
    return v;
  }
  v.entries.resize(lag_sums_.size());
  for (std::size_t q = 0; q < lag_sums_.size(); ++q) {
    v.entries[q] = lag_sums_[q] * inv_scale_[q];
  }
  return v;
}

void ObjectiveState::recompute_readouts() {
  if (spec_.mode == ObjectiveMode::target_series) {
    double acc = 0.0;
    for (std::size_t t = 0; t < series_.size(); ++t) {
      const double d = series_[t] - target_[t];
      acc += d * d;
    }
    delta_ = acc / static_cast<double>(series_.size());
    tolerance_excess_ = 0.0;
    return;
  }

  double acc = 0.0;
  double cand_wsum = 0.0;
  double excess = -std::numeric_limits<double>::infinity();
  const bool has_tol = !tolerances_.empty();
  for (std::size_t q = 0; q < lag_sums_.size(); ++q) {
    const double cand = lag_sums_[q] * inv_scale_[q];
    const double diff = target_[q] - cand;
    if (spec_.mode == ObjectiveMode::per_lag_l1) {
      acc += weights_[q] * std::abs(diff);
    } else {
      cand_wsum += weights_[q] * cand;
    }
    if (has_tol) excess = std::max(excess, std::abs(diff) - tolerances_[q]);
  }
  delta_ = spec_.mode == ObjectiveMode::per_lag_l1 ? acc
                                                   : std::abs(target_weighted_sum_ - cand_wsum);
  tolerance_excess_ = has_tol ? excess : 0.0;
}

void ObjectiveState::refresh() {
  if (spec_.mode != ObjectiveMode::target_series) {
    std::size_t offset = 0;
    for (const FeatureTerm& term : spec_.terms) {
      const std::span<const double> fv =
          term.f == Transform::centered ? centered_
          : term.f == Transform::absolute ? absolute_ : square_;
      const std::span<const double> gv =
          term.g == Transform::centered ? centered_
          : term.g == Transform::absolute ? absolute_ : square_;
      kernels::lagged_product_sums(fv, gv, term.max_lag, spec_.circular,
                                   std::span<double>(lag_sums_.data() + offset, term.max_lag));
      offset += term.max_lag;
    }
  }
  recompute_readouts();
  accepted_since_refresh_ = 0;
}

ObjectiveState init_objective_state(std::vector<double> z, const FeatureVector& target,
                                    const FeatureSpec& spec,
                                    std::vector<double> entry_tolerances) {
  spec.validate(z.size());

  ObjectiveState st;
  st.spec_ = spec;
  st.series_ = std::move(z);
  const std::size_t n = st.series_.size();
  if (n == 0) throw std::invalid_argument("empty candidate series");

  if (target.entries.size() != spec.entry_count()) {
    throw std::invalid_argument("target feature vector has " +
                                std::to_string(target.entries.size()) + " entries, spec needs " +
                                std::to_string(spec.entry_count()));
  }
  st.target_ = target.entries;

  if (spec.mode == ObjectiveMode::target_series) {
    if (!entry_tolerances.empty()) {
      throw std::invalid_argument("entry tolerances only apply to correlation objectives");
    }
    st.recompute_readouts();
    return st;
  }

  bool need_abs = false;
  bool need_sq = false;
  needs(spec, need_abs, need_sq);
  const double m = sorted_mean(st.series_);
  st.centered_.resize(n);
  for (std::size_t t = 0; t < n; ++t) st.centered_[t] = st.series_[t] - m;
  if (need_abs) {
    st.absolute_.resize(n);
    for (std::size_t t = 0; t < n; ++t) st.absolute_[t] = std::abs(st.centered_[t]);
  }
  if (need_sq) {
    st.square_.resize(n);
    for (std::size_t t = 0; t < n; ++t) st.square_[t] = st.centered_[t] * st.centered_[t];
  }

  const std::size_t entries = spec.entry_count();
  st.lag_sums_.assign(entries, 0.0);
  st.inv_scale_.resize(entries);
  st.weights_.resize(entries);
  st.entry_lag_.resize(entries);
  st.norms_.resize(spec.terms.size());
  st.term_offset_.resize(spec.terms.size());

  std::size_t offset = 0;
  for (std::size_t k = 0; k < spec.terms.size(); ++k) {
    const FeatureTerm& term = spec.terms[k];
    const std::span<const double> fv =
        term.f == Transform::centered ? st.centered_
        : term.f == Transform::absolute ? st.absolute_ : st.square_;
    const std::span<const double> gv =
        term.g == Transform::centered ? st.centered_
        : term.g == Transform::absolute ? st.absolute_ : st.square_;
    st.norms_[k] = term_norm(fv, gv, term.f, term.g, n);
    st.term_offset_[k] = offset;
    for (std::size_t tau = 1; tau <= term.max_lag; ++tau) {
      const double pairs = static_cast<double>(spec.circular ? n : n - tau);
      st.inv_scale_[offset + tau - 1] = 1.0 / (pairs * st.norms_[k]);
      st.weights_[offset + tau - 1] = term.weight;
      st.entry_lag_[offset + tau - 1] = tau;
    }
    offset += term.max_lag;
  }

  if (spec.mode == ObjectiveMode::paper_literal) {
    st.target_weighted_sum_ = 0.0;
    for (std::size_t q = 0; q < entries; ++q) {
      st.target_weighted_sum_ += st.weights_[q] * st.target_[q];
    }
  }

  if (!entry_tolerances.empty()) {
    if (entry_tolerances.size() != entries) {
      throw std::invalid_argument("entry tolerance vector size mismatch");
    }
    st.tolerances_ = std::move(entry_tolerances);
  }

  st.refresh();
  return st;
}

void swap_delta(const ObjectiveState& st, std::size_t i, std::size_t j, SwapUpdate& out) {
  const std::size_t n = st.series_.size();
  if (i == j) throw std::invalid_argument("swap indices must differ");
  if (i >= n || j >= n) throw std::invalid_argument("swap index out of range");

  out.i = i;
  out.j = j;
  out.version = st.version_;

  if (st.spec_.mode == ObjectiveMode::target_series) {
    out.sum_deltas.clear();
    const auto& z = st.series_;
    const auto& y = st.target_;
    const double old_i = z[i] - y[i];
    const double old_j = z[j] - y[j];
    const double new_i = z[j] - y[i];
    const double new_j = z[i] - y[j];
    out.new_delta = st.delta_ + (new_i * new_i + new_j * new_j - old_i * old_i -
                                 old_j * old_j) / static_cast<double>(n);
    out.new_tolerance_excess = 0.0;
    return;
  }

  const std::size_t entries = st.lag_sums_.size();
  out.sum_deltas.assign(entries, 0.0);
  const bool circ = st.spec_.circular;

  // Only lagged products whose index window touches i or j change; everything
  // else (norms, single-point averages) is permutation-invariant.
  std::size_t e = 0;
  for (std::size_t k = 0; k < st.spec_.terms.size(); ++k) {
    const FeatureTerm& term = st.spec_.terms[k];
    const double* fA = (term.f == Transform::centered   ? st.centered_
                        : term.f == Transform::absolute ? st.absolute_
                                                        : st.square_)
                           .data();
    const double* gA = (term.g == Transform::centered   ? st.centered_
                        : term.g == Transform::absolute ? st.absolute_
                                                        : st.square_)
                           .data();
    for (std::size_t tau = 1; tau <= term.max_lag; ++tau, ++e) {
      std::size_t ts[4];
      int nt = 0;
      const auto add = [&](std::size_t t) {
        for (int q = 0; q < nt; ++q) {
          if (ts[q] == t) return;
        }
        ts[nt++] = t;
      };
      if (circ) {
        add(i);
        add(j);
        add(i + tau >= n ? i + tau - n : i + tau);
        add(j + tau >= n ? j + tau - n : j + tau);
      } else {
        if (i >= tau) add(i);
        if (j >= tau) add(j);
        if (i + tau < n) add(i + tau);
        if (j + tau < n) add(j + tau);
      }
      double d = 0.0;
      for (int q = 0; q < nt; ++q) {
        const std::size_t t = ts[q];
        const std::size_t s = circ ? (t >= tau ? t - tau : t + n - tau) : t - tau;
        const std::size_t tn = t == i ? j : (t == j ? i : t);
        const std::size_t sn = s == i ? j : (s == j ? i : s);
        d += fA[tn] * gA[sn] - fA[t] * gA[s];
      }
      out.sum_deltas[e] = d;
    }
  }

  const bool has_tol = !st.tolerances_.empty();
  double excess = -std::numeric_limits<double>::infinity();
  if (st.spec_.mode == ObjectiveMode::per_lag_l1) {
    double acc = 0.0;
    for (std::size_t q = 0; q < entries; ++q) {
      const double cand = (st.lag_sums_[q] + out.sum_deltas[q]) * st.inv_scale_[q];
      const double diff = std::abs(st.target_[q] - cand);
      acc += st.weights_[q] * diff;
      if (has_tol) excess = std::max(excess, diff - st.tolerances_[q]);
    }
    out.new_delta = acc;
  } else {
    double cand_wsum = 0.0;
    for (std::size_t q = 0; q < entries; ++q) {
      const double cand = (st.lag_sums_[q] + out.sum_deltas[q]) * st.inv_scale_[q];
      cand_wsum += st.weights_[q] * cand;
      if (has_tol) {
        excess = std::max(excess, std::abs(st.target_[q] - cand) - st.tolerances_[q]);
      }
    }
    out.new_delta = std::abs(st.target_weighted_sum_ - cand_wsum);
  }
  out.new_tolerance_excess = has_tol ? excess : 0.0;
}

SwapUpdate swap_delta(const ObjectiveState& state, std::size_t i, std::size_t j) {
  SwapUpdate out;
  swap_delta(state, i, j, out);
  return out;
}

void apply_swap(ObjectiveState& st, const SwapUpdate& update) {
  if (update.version != st.version_) {
    throw std::logic_error("stale swap update: state version " + std::to_string(st.version_) +
                           ", update version " + std::to_string(update.version));
  }
  const std::size_t n = st.series_.size();
  if (update.i == update.j || update.i >= n || update.j >= n) {
    throw std::invalid_argument("invalid swap update indices");
  }

  std::swap(st.series_[update.i], st.series_[update.j]);
  if (!st.centered_.empty()) std::swap(st.centered_[update.i], st.centered_[update.j]);
  if (!st.absolute_.empty()) std::swap(st.absolute_[update.i], st.absolute_[update.j]);
  if (!st.square_.empty()) std::swap(st.square_[update.i], st.square_[update.j]);

  if (st.spec_.mode != ObjectiveMode::target_series) {
    if (update.sum_deltas.size() != st.lag_sums_.size()) {
      throw std::logic_error("swap update entry count mismatch");
    }
    for (std::size_t q = 0; q < st.lag_sums_.size(); ++q) {
      st.lag_sums_[q] += update.sum_deltas[q];
    }
  }
  st.delta_ = update.new_delta;
  st.tolerance_excess_ = update.new_tolerance_excess;
  ++st.version_;
  if (st.refresh_cadence_ > 0 && ++st.accepted_since_refresh_ >= st.refresh_cadence_) {
    st.refresh();
  }
}

}  // namespace smc

// smc: surrogate time-series generation by constrained randomization of
// empirical-distribution draws. Subcommands: fit, sample, surrogate,
// diagnose, toy.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "smc/anneal.hpp"
#include "smc/diagnostics.hpp"
#include "smc/empirical_dist.hpp"
#include "smc/features.hpp"
#include "smc/ingest.hpp"
#include "smc/table_io.hpp"

namespace fs = std::filesystem;

namespace {

using KV = std::vector<std::pair<std::string, std::string>>;

std::uint64_t env_default_seed() {
  if (const char* env = std::getenv("SMC_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 0;
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

struct FitOpts {
  std::string input;
  std::string column;
  std::size_t interval = 1;
  std::string out_dir = ".";
  std::string out;
};

int run_fit(const FitOpts& opt) {
  const smc::PriceSeries prices = smc::parse_price_csv(opt.input, opt.column);
  const smc::ReturnSeries returns = smc::log_returns(prices, opt.interval);
  const smc::EmpiricalDistribution dist = smc::fit_empirical_cdf(returns);

  fs::create_directories(opt.out_dir);
  const fs::path out = opt.out.empty() ? fs::path(opt.out_dir) / "dist.tsv" : fs::path(opt.out);
  smc::write_distribution_file(out, dist);

  KV manifest{
      {"subcommand", "fit"},
      {"input", opt.input},
      {"price_col", opt.column},
      {"interval", std::to_string(opt.interval)},
      {"rows", std::to_string(prices.prices.size())},
      {"returns", std::to_string(returns.values.size())},
      {"return_mean", smc::format_double(returns.mean)},
      {"out", out.string()},
  };
  smc::write_manifest(fs::path(opt.out_dir) / "fit_manifest.txt", manifest);
  std::cerr << "fit: " << returns.values.size() << " returns -> " << out.string() << "\n";
  return 0;
}

struct SampleOpts {
  std::string dist;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  std::string out;
};

int run_sample(const SampleOpts& opt) {
  const smc::EmpiricalDistribution dist = smc::read_distribution_file(opt.dist);
  const smc::SampleDraw draw = smc::sample_iid(dist, opt.n, opt.seed);

  fs::create_directories(opt.out_dir);
  const fs::path out = opt.out.empty() ? fs::path(opt.out_dir) / "draws.tsv" : fs::path(opt.out);
  smc::write_series_file(out, draw.values,
                         {"i.i.d. draws from " + opt.dist, "seed " + std::to_string(opt.seed)});

  KV manifest{
      {"subcommand", "sample"},
      {"dist", opt.dist},
      {"n", std::to_string(opt.n)},
      {"seed", std::to_string(opt.seed)},
      {"out", out.string()},
  };
  smc::write_manifest(fs::path(opt.out_dir) / "sample_manifest.txt", manifest);
  return 0;
}

struct SurrogateOpts {
  std::string input;
  std::string column;
  std::size_t interval = 1;
  std::string spec_file;
  std::string preset;
  std::size_t L = 0;
  std::size_t K = 0;
  std::size_t n_real = 1;
  std::size_t draw_n = 0;  // 0: one draw per observed return
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  bool paper_literal = false;
  bool circular = false;
  bool band_goal = false;
  bool quiet = false;
  smc::AnnealConfig cfg;
  std::optional<double> initial_temp;
};

int run_surrogate(SurrogateOpts& opt) {
  if (opt.spec_file.empty() == opt.preset.empty()) {
    std::cerr << "surrogate: exactly one of --spec or --preset is required\n";
    return 1;
  }

  smc::FeatureSpec spec;
  if (!opt.spec_file.empty()) {
    spec = smc::load_feature_spec(opt.spec_file);
  } else if (opt.preset == "sp500") {
    spec = smc::FeatureSpec::sp500_preset(opt.L ? opt.L : 40, opt.K ? opt.K : 200);
  } else {
    std::cerr << "surrogate: unknown preset '" << opt.preset << "'\n";
    return 1;
  }
  if (opt.paper_literal && spec.mode == smc::ObjectiveMode::per_lag_l1) {
    spec.mode = smc::ObjectiveMode::paper_literal;
  }
  spec.circular = spec.circular || opt.circular;

  const smc::PriceSeries prices = smc::parse_price_csv(opt.input, opt.column);
  const smc::ReturnSeries returns = smc::log_returns(prices, opt.interval);
  const smc::ReturnSeries centered = smc::demean(returns);

  const std::size_t draw_n = opt.draw_n ? opt.draw_n : returns.values.size();
  spec.validate(std::min(draw_n, returns.values.size()));

  const smc::FeatureVector target = smc::rho(centered.values, spec);
  const smc::EmpiricalDistribution dist = smc::fit_empirical_cdf(returns);

  smc::AnnealConfig cfg = opt.cfg;
  cfg.initial_temp = opt.initial_temp;
  cfg.seed = opt.seed;
  if (opt.band_goal) {
    cfg.band_goal = smc::band_tolerances(spec, std::min(draw_n, returns.values.size()));
  }

  fs::create_directories(opt.out_dir);
  smc::write_series_file(fs::path(opt.out_dir) / "returns.tsv", returns.values,
                         {"log returns of " + opt.input});

  smc::ProgressFn progress;
  if (!opt.quiet) {
    progress = [](const smc::ProgressEvent& ev) {
      std::cerr << "realization " << ev.realization << "  iteration " << ev.iteration
                << "  delta " << ev.delta << "  temperature " << ev.temperature << "\n";
    };
  }

  const std::vector<smc::AnnealReport> reports = smc::run_realizations(
      opt.n_real, opt.seed, dist, draw_n, target, spec, cfg, progress);

  KV manifest{
      {"subcommand", "surrogate"},
      {"input", opt.input},
      {"price_col", opt.column},
      {"interval", std::to_string(opt.interval)},
      {"spec", opt.spec_file.empty() ? "preset:" + opt.preset : opt.spec_file},
      {"mode", smc::to_string(spec.mode)},
      {"circular", bool_str(spec.circular)},
      {"n_real", std::to_string(opt.n_real)},
      {"draw_n", std::to_string(draw_n)},
      {"seed", std::to_string(opt.seed)},
      {"goal", smc::format_double(cfg.goal)},
      {"band_goal", bool_str(opt.band_goal)},
      {"cooling_factor", smc::format_double(cfg.cooling_factor)},
      {"max_iterations", std::to_string(cfg.max_iterations)},
      {"max_success", std::to_string(cfg.max_success)},
      {"max_total", std::to_string(cfg.max_total)},
      {"remelt_factor", smc::format_double(cfg.remelt_factor)},
      {"initial_temp", opt.initial_temp ? smc::format_double(*opt.initial_temp) : "auto"},
      {"log_every", std::to_string(cfg.log_every)},
      {"refresh_every", std::to_string(cfg.refresh_every)},
  };

  int exit_code = 0;
  for (std::size_t k = 0; k < reports.size(); ++k) {
    const smc::AnnealReport& rep = reports[k];
    const fs::path out = fs::path(opt.out_dir) / ("surrogate_" + std::to_string(k) + ".tsv");
    smc::write_series_file(out, rep.final_series,
                           {"surrogate realization " + std::to_string(k),
                            "terminated_by " + std::string(smc::to_string(rep.terminated_by)),
                            "iterations " + std::to_string(rep.iterations),
                            "final_delta " + smc::format_double(rep.final_delta)});
    const std::string prefix = "realization_" + std::to_string(k) + ".";
    manifest.emplace_back(prefix + "terminated_by", smc::to_string(rep.terminated_by));
    manifest.emplace_back(prefix + "iterations", std::to_string(rep.iterations));
    manifest.emplace_back(prefix + "accepted", std::to_string(rep.accepted));
    manifest.emplace_back(prefix + "final_delta", smc::format_double(rep.final_delta));
    manifest.emplace_back(prefix + "initial_temp", smc::format_double(rep.initial_temp_used));
    manifest.emplace_back(prefix + "out", out.string());
    if (rep.terminated_by == smc::Termination::frozen) {
      exit_code = 3;
    } else if (rep.terminated_by == smc::Termination::max_iterations && exit_code == 0) {
      exit_code = 2;
    }
  }
  smc::write_manifest(fs::path(opt.out_dir) / "surrogate_manifest.txt", manifest);
  return exit_code;
}

struct DiagnoseOpts {
  std::string target;
  std::string surrogate;
  std::size_t L = 40;
  std::size_t K = 200;
  std::size_t phase_lag = 1;
  std::string out_dir = ".";
};

int run_diagnose(const DiagnoseOpts& opt) {
  const std::vector<double> x = smc::read_series_file(opt.target);
  const std::vector<double> z = smc::read_series_file(opt.surrogate);

  fs::create_directories(opt.out_dir);
  const auto panels = smc::acf_panels(x, z, opt.L, opt.K);
  for (const smc::AcfPanel& panel : panels) {
    std::vector<double> lags(panel.lags.begin(), panel.lags.end());
    smc::write_table(fs::path(opt.out_dir) / (panel.name + ".tsv"),
                     {"target " + opt.target, "surrogate " + opt.surrogate},
                     {"lag", "target", "surrogate", "band"},
                     {lags, panel.target_values, panel.surrogate_values, panel.band});
  }

  // Folded CDF of both series on their own knot grids, one labelled block each.
  {
    std::ofstream out(fs::path(opt.out_dir) / "cdf_fold.tsv");
    if (!out) throw std::runtime_error("cannot write cdf_fold.tsv");
    out << "# folded CDF (mountain plot)\n# columns: series x p\n";
    const auto write_block = [&out](const std::string& label, const std::vector<double>& v) {
      const auto folded = smc::folded_cdf(smc::fit_empirical_cdf(v));
      for (const auto& [value, p] : folded) {
        out << label << '\t' << smc::format_double(value) << '\t' << smc::format_double(p)
            << '\n';
      }
    };
    write_block("target", x);
    write_block("surrogate", z);
  }

  const smc::PhaseDiagram pd = smc::phase_diagram(z, opt.phase_lag);
  std::vector<double> col_a(pd.points.size());
  std::vector<double> col_b(pd.points.size());
  for (std::size_t t = 0; t < pd.points.size(); ++t) {
    col_a[t] = pd.points[t].first;
    col_b[t] = pd.points[t].second;
  }
  smc::write_table(fs::path(opt.out_dir) / "phase.tsv",
                   {"phase diagram of " + opt.surrogate,
                    "lag " + std::to_string(opt.phase_lag)},
                   {"z_t", "z_t_plus_lag"}, {col_a, col_b});

  KV manifest{
      {"subcommand", "diagnose"}, {"target", opt.target},
      {"surrogate", opt.surrogate}, {"L", std::to_string(opt.L)},
      {"K", std::to_string(opt.K)}, {"phase_lag", std::to_string(opt.phase_lag)},
      {"band", "2.576/sqrt(N-tau), 99% white-noise level"},
  };
  smc::write_manifest(fs::path(opt.out_dir) / "diagnose_manifest.txt", manifest);
  return 0;
}

struct ToyAr1Opts {
  double p = 0.6;
  std::size_t n = 10'000;
  std::uint64_t seed = 0;
  std::size_t burn_in = 0;
  std::string out_dir = ".";
  std::string out;
};

int run_toy_ar1(const ToyAr1Opts& opt) {
  const std::vector<double> z = smc::ar1_generate(opt.p, opt.n, opt.seed, opt.burn_in);
  fs::create_directories(opt.out_dir);
  const fs::path out = opt.out.empty() ? fs::path(opt.out_dir) / "ar1.tsv" : fs::path(opt.out);
  smc::write_series_file(out, z,
                         {"AR(1) p=" + smc::format_double(opt.p) + " n=" + std::to_string(opt.n) +
                          " seed=" + std::to_string(opt.seed)});
  KV manifest{
      {"subcommand", "toy ar1"},
      {"p", smc::format_double(opt.p)},
      {"n", std::to_string(opt.n)},
      {"seed", std::to_string(opt.seed)},
      {"burn_in", std::to_string(opt.burn_in)},
      {"out", out.string()},
  };
  smc::write_manifest(fs::path(opt.out_dir) / "toy_ar1_manifest.txt", manifest);
  return 0;
}

struct ToySineOpts {
  double period = 200.0;
  std::size_t n = 10'000;
  std::string out_dir = ".";
  std::string out;
};

int run_toy_sine(const ToySineOpts& opt) {
  const std::vector<double> y = smc::sine_generate(opt.period, opt.n);
  fs::create_directories(opt.out_dir);
  const fs::path out = opt.out.empty() ? fs::path(opt.out_dir) / "sine.tsv" : fs::path(opt.out);
  smc::write_series_file(out, y,
                         {"sine period=" + smc::format_double(opt.period) +
                          " n=" + std::to_string(opt.n)});
  KV manifest{
      {"subcommand", "toy sine"},
      {"T", smc::format_double(opt.period)},
      {"n", std::to_string(opt.n)},
      {"out", out.string()},
  };
  smc::write_manifest(fs::path(opt.out_dir) / "toy_sine_manifest.txt", manifest);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"surrogate Monte Carlo generator for time series"};
  app.require_subcommand(1);
  const std::uint64_t default_seed = env_default_seed();

  FitOpts fit_opt;
  auto* fit = app.add_subcommand("fit", "fit the empirical return distribution from prices");
  fit->add_option("--input", fit_opt.input, "delimited price file with header row")->required();
  fit->add_option("--price-col", fit_opt.column, "price column name or zero-based index")
      ->required();
  fit->add_option("--interval", fit_opt.interval, "return interval in rows");
  fit->add_option("--out-dir", fit_opt.out_dir, "output directory");
  fit->add_option("--out", fit_opt.out, "distribution table path (default <out-dir>/dist.tsv)");

  SampleOpts sample_opt;
  sample_opt.seed = default_seed;
  auto* sample = app.add_subcommand("sample", "draw i.i.d. samples from a fitted distribution");
  sample->add_option("--dist", sample_opt.dist, "distribution table from `smc fit`")->required();
  sample->add_option("--n", sample_opt.n, "number of draws")->required();
  sample->add_option("--seed", sample_opt.seed, "RNG seed (default $SMC_SEED)");
  sample->add_option("--out-dir", sample_opt.out_dir, "output directory");
  sample->add_option("--out", sample_opt.out, "draw file path (default <out-dir>/draws.tsv)");

  SurrogateOpts sur_opt;
  sur_opt.seed = default_seed;
  double initial_temp_value = -1.0;
  auto* sur = app.add_subcommand("surrogate", "generate surrogate series by annealing draws");
  sur->add_option("--input", sur_opt.input, "delimited price file")->required();
  sur->add_option("--price-col", sur_opt.column, "price column name or index")->required();
  sur->add_option("--interval", sur_opt.interval, "return interval in rows");
  sur->add_option("--spec", sur_opt.spec_file, "feature spec file (JSON)");
  sur->add_option("--preset", sur_opt.preset, "feature preset: sp500 (L=40, K=200)");
  sur->add_option("--L", sur_opt.L, "override preset L");
  sur->add_option("--K", sur_opt.K, "override preset K");
  sur->add_option("--n-real", sur_opt.n_real, "number of independent realizations");
  sur->add_option("--n", sur_opt.draw_n, "draws per realization (default: #returns)");
  sur->add_option("--seed", sur_opt.seed, "base seed (default $SMC_SEED)");
  sur->add_option("--out-dir", sur_opt.out_dir, "output directory");
  sur->add_option("--goal", sur_opt.cfg.goal, "terminate when delta <= goal");
  sur->add_flag("--band-goal", sur_opt.band_goal,
                "terminate when every per-lag discrepancy fits the 99% band");
  sur->add_option("--cooling", sur_opt.cfg.cooling_factor, "cooling factor per stage");
  sur->add_option("--max-iter", sur_opt.cfg.max_iterations, "iteration budget");
  sur->add_option("--max-success", sur_opt.cfg.max_success, "accepted swaps per stage (0: 2N)");
  sur->add_option("--max-total", sur_opt.cfg.max_total, "proposals per stage (0: 20N)");
  sur->add_option("--remelt", sur_opt.cfg.remelt_factor, "remelt factor after a frozen stage");
  auto* temp_opt = sur->add_option("--initial-temp", initial_temp_value,
                                   "starting temperature (default: auto-calibrated)");
  sur->add_option("--log-every", sur_opt.cfg.log_every, "progress/trajectory cadence");
  sur->add_option("--refresh-every", sur_opt.cfg.refresh_every,
                  "full objective recompute cadence (accepted swaps)");
  sur->add_flag("--paper-literal", sur_opt.paper_literal,
                "aggregate the objective as |sum - sum| instead of per-lag L1");
  sur->add_flag("--circular", sur_opt.circular, "periodic boundaries in the estimator");
  sur->add_flag("--quiet", sur_opt.quiet, "suppress progress lines on stderr");

  DiagnoseOpts diag_opt;
  auto* diag = app.add_subcommand("diagnose", "write ACF panels, folded CDF and phase diagram");
  diag->add_option("--target", diag_opt.target, "target series file")->required();
  diag->add_option("--surrogate", diag_opt.surrogate, "surrogate series file")->required();
  diag->add_option("--L", diag_opt.L, "lags for return/leverage panels");
  diag->add_option("--K", diag_opt.K, "lags for the absolute-return panel");
  diag->add_option("--phase-lag", diag_opt.phase_lag, "phase-diagram embedding lag");
  diag->add_option("--out-dir", diag_opt.out_dir, "output directory");

  auto* toy = app.add_subcommand("toy", "generate toy series");
  toy->require_subcommand(1);
  ToyAr1Opts ar1_opt;
  ar1_opt.seed = default_seed;
  auto* ar1 = toy->add_subcommand("ar1", "AR(1) process with stationary start");
  ar1->add_option("--p", ar1_opt.p, "autoregressive coefficient, |p| < 1")->required();
  ar1->add_option("--n", ar1_opt.n, "length");
  ar1->add_option("--seed", ar1_opt.seed, "RNG seed (default $SMC_SEED)");
  ar1->add_option("--burn-in", ar1_opt.burn_in, "burn-in steps instead of stationary start");
  ar1->add_option("--out-dir", ar1_opt.out_dir, "output directory");
  ar1->add_option("--out", ar1_opt.out, "series path (default <out-dir>/ar1.tsv)");

  ToySineOpts sine_opt;
  auto* sine = toy->add_subcommand("sine", "sampled sine wave");
  sine->add_option("--T", sine_opt.period, "period in samples");
  sine->add_option("--n", sine_opt.n, "length");
  sine->add_option("--out-dir", sine_opt.out_dir, "output directory");
  sine->add_option("--out", sine_opt.out, "series path (default <out-dir>/sine.tsv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*fit) return run_fit(fit_opt);
    if (*sample) return run_sample(sample_opt);
    if (*sur) {
      if (*temp_opt) sur_opt.initial_temp = initial_temp_value;
      return run_surrogate(sur_opt);
    }
    if (*diag) return run_diagnose(diag_opt);
    if (*ar1) return run_toy_ar1(ar1_opt);
    if (*sine) return run_toy_sine(sine_opt);
  } catch (const std::exception& e) {
    std::cerr << "smc: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

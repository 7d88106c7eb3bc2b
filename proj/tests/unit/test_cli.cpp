// Process-level checks of the smc binary. The path comes in through the
// SMC_CLI_PATH compile definition.

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(SMC_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_prices(const fs::path& path, int rows) {
  std::ofstream out(path);
  out << "date,close\n";
  double price = 100.0;
  for (int k = 0; k < rows; ++k) {
    price *= (k % 3 == 0) ? 1.01 : (k % 3 == 1 ? 0.995 : 1.002);
    char date[16];
    std::snprintf(date, sizeof(date), "2020-%02d-%02d", 1 + k / 28, 1 + k % 28);
    out << date << ',' << price << '\n';
  }
}

}  // namespace

TEST_CASE("usage errors exit with code 1") {
  CHECK(run("surrogate") == 1);
  CHECK(run("") == 1);
  CHECK(run("toy ar1 --p 0.6 --bogus-flag 1") == 1);
  CHECK(run("--help") == 0);
}

TEST_CASE("toy generators are byte-identical across reruns") {
  const fs::path a = fresh_dir("smc_cli_toy_a");
  const fs::path b = fresh_dir("smc_cli_toy_b");
  REQUIRE(run("toy ar1 --p 0.6 --n 100 --seed 1 --out-dir " + a.string()) == 0);
  REQUIRE(run("toy ar1 --p 0.6 --n 100 --seed 1 --out-dir " + b.string()) == 0);
  CHECK(slurp(a / "ar1.tsv") == slurp(b / "ar1.tsv"));
  CHECK(!slurp(a / "ar1.tsv").empty());

  REQUIRE(run("toy sine --T 16 --n 64 --out-dir " + a.string()) == 0);
  CHECK(fs::exists(a / "sine.tsv"));
  CHECK(fs::exists(a / "toy_sine_manifest.txt"));
}

TEST_CASE("fit, sample, surrogate and diagnose chain into a pipeline") {
  const fs::path dir = fresh_dir("smc_cli_pipeline");
  const fs::path prices = dir / "prices.csv";
  write_prices(prices, 600);

  REQUIRE(run("fit --input " + prices.string() + " --price-col close --out-dir " +
              dir.string()) == 0);
  CHECK(fs::exists(dir / "dist.tsv"));
  CHECK(fs::exists(dir / "fit_manifest.txt"));

  REQUIRE(run("sample --dist " + (dir / "dist.tsv").string() + " --n 500 --seed 9 --out-dir " +
              dir.string()) == 0);
  CHECK(fs::exists(dir / "draws.tsv"));

  // Tiny preset run within a small iteration budget; max_iterations exit is 2.
  const int code = run("surrogate --input " + prices.string() +
                       " --price-col close --preset sp500 --L 3 --K 6 --n-real 2 --seed 5" +
                       " --max-iter 3000 --quiet --out-dir " + dir.string());
  CHECK((code == 0 || code == 2));
  CHECK(fs::exists(dir / "surrogate_0.tsv"));
  CHECK(fs::exists(dir / "surrogate_1.tsv"));
  CHECK(fs::exists(dir / "returns.tsv"));
  const std::string manifest = slurp(dir / "surrogate_manifest.txt");
  CHECK(manifest.find("realization_1.terminated_by") != std::string::npos);

  REQUIRE(run("diagnose --target " + (dir / "returns.tsv").string() + " --surrogate " +
              (dir / "surrogate_0.tsv").string() + " --L 3 --K 6 --phase-lag 1 --out-dir " +
              dir.string()) == 0);
  for (const char* name : {"acf_abs.tsv", "acf_lev.tsv", "acf_ret.tsv", "cdf_fold.tsv",
                           "phase.tsv", "diagnose_manifest.txt"}) {
    CHECK(fs::exists(dir / name));
  }

  // Input files are never mutated.
  const std::string before = slurp(prices);
  REQUIRE(run("fit --input " + prices.string() + " --price-col close --out-dir " +
              dir.string()) == 0);
  CHECK(slurp(prices) == before);
}

TEST_CASE("surrogate accepts a JSON spec file and the paper-literal flag") {
  const fs::path dir = fresh_dir("smc_cli_spec");
  const fs::path prices = dir / "prices.csv";
  write_prices(prices, 200);

  const fs::path spec = dir / "spec.json";
  {
    std::ofstream out(spec);
    out << R"({"mode": "per-lag-l1",
               "terms": [{"f": "centered", "g": "centered", "max_lag": 3, "weight": 1.0},
                         {"f": "absolute", "g": "absolute", "max_lag": 5}]})";
  }
  const int code = run("surrogate --input " + prices.string() +
                       " --price-col close --spec " + spec.string() +
                       " --seed 3 --max-iter 1000 --quiet --out-dir " + dir.string());
  CHECK((code == 0 || code == 2));
  CHECK(fs::exists(dir / "surrogate_0.tsv"));
  const std::string manifest = slurp(dir / "surrogate_manifest.txt");
  CHECK(manifest.find("mode = per-lag-l1") != std::string::npos);

  const int literal = run("surrogate --input " + prices.string() +
                          " --price-col close --spec " + spec.string() +
                          " --paper-literal --seed 3 --max-iter 1000 --quiet --out-dir " +
                          (dir / "lit").string());
  CHECK((literal == 0 || literal == 2));
  CHECK(slurp(dir / "lit" / "surrogate_manifest.txt").find("mode = paper-literal") !=
        std::string::npos);

  // Both --spec and --preset at once is a usage error.
  CHECK(run("surrogate --input " + prices.string() + " --price-col close --spec " +
            spec.string() + " --preset sp500 --max-iter 100 --quiet --out-dir " +
            dir.string()) == 1);
}

TEST_CASE("surrogate runs are reproducible end to end") {
  const fs::path dir = fresh_dir("smc_cli_repro");
  const fs::path prices = dir / "prices.csv";
  write_prices(prices, 300);

  const std::string args = "surrogate --input " + prices.string() +
                           " --price-col close --preset sp500 --L 2 --K 4 --n-real 1" +
                           " --seed 77 --max-iter 2000 --quiet --out-dir ";
  REQUIRE(run(args + (dir / "a").string()) >= 0);
  REQUIRE(run(args + (dir / "b").string()) >= 0);
  CHECK(slurp(dir / "a" / "surrogate_0.tsv") == slurp(dir / "b" / "surrogate_0.tsv"));
  CHECK(!slurp(dir / "a" / "surrogate_0.tsv").empty());
}

TEST_CASE("SMC_SEED provides the default seed") {
  const fs::path a = fresh_dir("smc_cli_env_a");
  const fs::path b = fresh_dir("smc_cli_env_b");
  const std::string base = std::string(SMC_CLI_PATH) + " toy ar1 --p 0.5 --n 50 --out-dir ";
  REQUIRE(std::system(("SMC_SEED=99 " + base + a.string() + " > /dev/null 2>&1").c_str()) == 0);
  REQUIRE(std::system((base + b.string() + " --seed 99 > /dev/null 2>&1").c_str()) == 0);
  CHECK(slurp(a / "ar1.tsv") == slurp(b / "ar1.tsv"));
}

#include "smc/table_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace smc {

std::string format_double(double x) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof(buf), "%.17g", x);
  return std::string(buf, static_cast<std::size_t>(len));
}

void write_series_file(const std::filesystem::path& path, std::span<const double> values,
                       const std::vector<std::string>& comments) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  for (const auto& c : comments) out << "# " << c << '\n';
  for (double v : values) out << format_double(v) << '\n';
}

std::vector<double> read_series_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path.string());
  std::vector<double> values;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    double v = 0.0;
    const char* first = line.data();
    const char* last = line.data() + line.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) {
      throw std::runtime_error("bad value '" + line + "' at line " + std::to_string(lineno) +
                               " of " + path.string());
    }
    values.push_back(v);
  }
  if (values.empty()) throw std::runtime_error("no values in " + path.string());
  return values;
}

void write_table(const std::filesystem::path& path, const std::vector<std::string>& comments,
                 const std::vector<std::string>& column_names,
                 const std::vector<std::vector<double>>& columns) {
  if (column_names.size() != columns.size()) {
    throw std::invalid_argument("column name/data count mismatch");
  }
  for (const auto& col : columns) {
    if (col.size() != columns.front().size()) {
      throw std::invalid_argument("table columns must have equal length");
    }
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  for (const auto& c : comments) out << "# " << c << '\n';
  out << "# columns:";
  for (const auto& name : column_names) out << ' ' << name;
  out << '\n';
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) out << '\t';
      out << format_double(columns[c][r]);
    }
    out << '\n';
  }
}

void write_manifest(const std::filesystem::path& path,
                    const std::vector<std::pair<std::string, std::string>>& entries) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write manifest: " + path.string());
  out << "# run manifest; rerunning with these settings reproduces the outputs\n";
  for (const auto& [key, value] : entries) out << key << " = " << value << '\n';
}

void write_distribution_file(const std::filesystem::path& path,
                             const EmpiricalDistribution& d) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  out << "# empirical distribution table\n";
  out << "# columns: value level\n";
  for (std::size_t i = 0; i < d.size(); ++i) {
    out << format_double(d.sorted_values[i]) << '\t' << format_double(d.cdf_levels[i]) << '\n';
  }
}

EmpiricalDistribution read_distribution_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path.string());
  EmpiricalDistribution d;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw std::runtime_error("expected two tab-separated columns at line " +
                               std::to_string(lineno) + " of " + path.string());
    }
    double value = 0.0;
    double level = 0.0;
    const char* vfirst = line.data();
    auto [vp, vec] = std::from_chars(vfirst, vfirst + tab, value);
    const char* lfirst = line.data() + tab + 1;
    auto [lp, lec] = std::from_chars(lfirst, line.data() + line.size(), level);
    if (vec != std::errc{} || lec != std::errc{} || vp != vfirst + tab ||
        lp != line.data() + line.size()) {
      throw std::runtime_error("bad row at line " + std::to_string(lineno) + " of " +
                               path.string());
    }
    d.sorted_values.push_back(value);
    d.cdf_levels.push_back(level);
  }
  if (d.size() < 2) throw std::runtime_error("distribution table too short: " + path.string());
  for (std::size_t i = 1; i < d.size(); ++i) {
    if (d.sorted_values[i] < d.sorted_values[i - 1] || d.cdf_levels[i] <= d.cdf_levels[i - 1]) {
      throw std::runtime_error("distribution table not sorted: " + path.string());
    }
  }
  return d;
}

}  // namespace smc

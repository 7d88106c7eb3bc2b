#include "smc/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "smc/numeric.hpp"

namespace smc {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  std::string out = s.substr(b, e - b);
  if (out.size() >= 2 && out.front() == '"' && out.back() == '"') {
    out = out.substr(1, out.size() - 2);
  }
  return out;
}

std::vector<std::string> split_row(const std::string& line, char delim) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, delim)) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == delim) cells.emplace_back();
  return cells;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool parse_double(const std::string& cell, double& out) {
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

}  // namespace

ReturnSeries ReturnSeries::from_values(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("return series must not be empty");
  ReturnSeries r;
  r.mean = sorted_mean(values);
  r.values = std::move(values);
  return r;
}

PriceSeries parse_price_csv(const std::filesystem::path& path, const std::string& column) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file: " + path.string());

  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error("empty input file: " + path.string());
  if (!header.empty() && header.back() == '\r') header.pop_back();

  const char delim = header.find('\t') != std::string::npos ? '\t' : ',';
  const std::vector<std::string> names = split_row(header, delim);

  // Column selected by zero-based index or by name.
  std::size_t price_col = names.size();
  double index_value = 0.0;
  if (parse_double(column, index_value) && index_value >= 0 &&
      index_value == std::floor(index_value)) {
    price_col = static_cast<std::size_t>(index_value);
    if (price_col >= names.size()) {
      throw std::runtime_error("price column index " + column + " out of range (file has " +
                               std::to_string(names.size()) + " columns)");
    }
  } else {
    for (std::size_t c = 0; c < names.size(); ++c) {
      if (names[c] == column || lower(names[c]) == lower(column)) {
        price_col = c;
        break;
      }
    }
    if (price_col == names.size()) {
      std::string available;
      for (const auto& n : names) available += (available.empty() ? "" : ", ") + n;
      throw std::runtime_error("price column '" + column + "' not found; columns: " + available);
    }
  }

  // Optional date column, carried through as labels only.
  std::size_t date_col = names.size();
  for (std::size_t c = 0; c < names.size(); ++c) {
    const std::string n = lower(names[c]);
    if (c != price_col && (n == "date" || n == "timestamp" || n == "time" || n == "day")) {
      date_col = c;
      break;
    }
  }

  PriceSeries series;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;  // tolerate a trailing blank line
    ++row;
    const std::vector<std::string> cells = split_row(line, delim);
    if (cells.size() <= price_col) {
      throw std::runtime_error("row " + std::to_string(row) + " has " +
                               std::to_string(cells.size()) + " cells, price column is " +
                               std::to_string(price_col));
    }
    const std::string& cell = cells[price_col];
    if (cell.empty()) {
      throw std::runtime_error("blank price cell at row " + std::to_string(row));
    }
    double price = 0.0;
    if (!parse_double(cell, price) || !std::isfinite(price)) {
      throw std::runtime_error("non-numeric price '" + cell + "' at row " + std::to_string(row));
    }
    if (price <= 0.0) {
      throw std::runtime_error("non-positive price at row " + std::to_string(row));
    }
    series.prices.push_back(price);
    if (date_col < cells.size()) {
      series.timestamps.push_back(cells[date_col]);
      if (series.timestamps.size() >= 2 &&
          !(series.timestamps[series.timestamps.size() - 2] < series.timestamps.back())) {
        throw std::runtime_error("timestamps not strictly increasing at row " +
                                 std::to_string(row));
      }
    }
  }

  if (series.prices.size() < 2) {
    throw std::runtime_error("need at least 2 price rows, got " +
                             std::to_string(series.prices.size()));
  }
  if (!series.timestamps.empty() && series.timestamps.size() != series.prices.size()) {
    throw std::runtime_error("date column missing on some rows");
  }
  return series;
}

ReturnSeries log_returns(const PriceSeries& prices, std::size_t interval) {
  const std::size_t n = prices.prices.size();
  if (interval < 1) throw std::invalid_argument("interval must be >= 1");
  if (interval >= n) {
    throw std::invalid_argument("interval " + std::to_string(interval) +
                                " must be smaller than the series length " + std::to_string(n));
  }
  std::vector<double> values(n - interval);
  for (std::size_t k = 0; k + interval < n; ++k) {
    values[k] = std::log(prices.prices[k + interval]) - std::log(prices.prices[k]);
  }
  return ReturnSeries::from_values(std::move(values));
}

ReturnSeries demean(const ReturnSeries& r) {
  ReturnSeries out;
  out.values.resize(r.values.size());
  for (std::size_t k = 0; k < r.values.size(); ++k) out.values[k] = r.values[k] - r.mean;
  out.mean = 0.0;
  return out;
}

}  // namespace smc

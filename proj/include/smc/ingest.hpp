#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace smc {

// Raw price observations in row order. Timestamps are carried as labels only;
// all lag arithmetic downstream is in row units.
struct PriceSeries {
  std::vector<std::string> timestamps;  // empty when the file has no date column
  std::vector<double> prices;
};

struct ReturnSeries {
  std::vector<double> values;
  double mean = 0.0;

  static ReturnSeries from_values(std::vector<double> values);
};

// Load a delimited text file (comma or tab, detected from the header row) and
// extract one strictly positive price column selected by name or zero-based
// index. Missing, blank, non-numeric or non-positive cells are hard errors;
// nothing is skipped silently.
PriceSeries parse_price_csv(const std::filesystem::path& path, const std::string& column);

// values[k] = log(prices[k + interval]) - log(prices[k])
ReturnSeries log_returns(const PriceSeries& prices, std::size_t interval = 1);

// Subtract the cached mean; the output's mean field is exactly zero.
ReturnSeries demean(const ReturnSeries& r);

}  // namespace smc

#include "smc/numeric.hpp"

#include <algorithm>
#include <vector>

namespace smc {

double sorted_mean(std::span<const double> v) {
  if (v.empty()) return 0.0;
  std::vector<double> s(v.begin(), v.end());
  std::sort(s.begin(), s.end());
  double sum = 0.0;
  for (double x : s) sum += x;
  return sum / static_cast<double>(s.size());
}

double sorted_sum_squares(std::span<const double> v) {
  std::vector<double> s(v.begin(), v.end());
  std::sort(s.begin(), s.end());
  double sum = 0.0;
  for (double x : s) sum += x * x;
  return sum;
}

}  // namespace smc

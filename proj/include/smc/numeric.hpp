#pragma once

#include <span>

namespace smc {

// Mean accumulated over a sorted copy of the input. Summation order is fixed
// by value, so the result is bit-identical under any permutation of the input.
double sorted_mean(std::span<const double> v);

// Sum of squares accumulated in sorted-value order; permutation-invariant
// like sorted_mean. Used for the fixed normalization constants.
double sorted_sum_squares(std::span<const double> v);

}  // namespace smc

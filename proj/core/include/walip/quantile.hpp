#pragma once

#include <cstddef>
#include <span>

namespace walip {

/// 1-based nearest-rank position ceil(q * count), clamped to [1, count].
/// Requires count >= 1 and q in [0, 1].
std::size_t nearest_rank(std::size_t count, double q);

/// Nearest-rank (inverse empirical CDF) quantile: the nearest_rank(k, q)-th
/// smallest of the k values. Throws InvalidArgument on empty input or q
/// outside [0, 1].
double quantile(std::span<const double> values, double q);

}  // namespace walip

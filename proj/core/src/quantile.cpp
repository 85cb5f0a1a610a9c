#include "walip/quantile.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "walip/error.hpp"

namespace walip {

std::size_t nearest_rank(std::size_t count, double q) {
  if (count == 0) throw InvalidArgument("quantile of an empty set");
  if (!(q >= 0.0 && q <= 1.0)) throw InvalidArgument("quantile level must lie in [0, 1]");
  // The slack absorbs representation error in q * count (0.1 * 30 > 3).
  const double r = std::ceil(q * static_cast<double>(count) - 1e-9);
  if (r < 1.0) return 1;
  return std::min(count, static_cast<std::size_t>(r));
}

double quantile(std::span<const double> values, double q) {
  const std::size_t rank = nearest_rank(values.size(), q);
  std::vector<double> v(values.begin(), values.end());
  auto nth = v.begin() + static_cast<std::ptrdiff_t>(rank - 1);
  std::nth_element(v.begin(), nth, v.end());
  return *nth;
}

}  // namespace walip

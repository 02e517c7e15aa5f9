#include "wdm/smooth.hpp"

#include <algorithm>
#include <cmath>

namespace wdm {

double seminorm(const SmoothFunction& f, Interval K, int k, std::size_t samples, kernels::Exec exec) {
  if (k < 0) throw std::invalid_argument("seminorm order must be >= 0");
  if (k > f.max_order())
    throw UnsupportedOrder("seminorm order " + std::to_string(k) + " exceeds what " + f.name() + " provides");
  samples = std::max<std::size_t>(samples, 2);
  const double h = K.length() / static_cast<double>(samples - 1);

  double total = 0.0;
  std::vector<double> column(samples);
  for (int j = 0; j <= k; ++j) {
    kernels::evaluate(
        [&](std::size_t i) { return f.derivative(K.lo + static_cast<double>(i) * h, j); }, column, exec);
    total += kernels::max_abs(column, exec);
  }
  return total;
}

}  // namespace wdm

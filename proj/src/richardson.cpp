#include "wdm/richardson.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace wdm {

RichardsonResult richardson_one_sided(const std::function<double(double)>& F, double t0, Side side,
                                      const RichardsonOptions& options) {
  if (!(options.t_start > 0.0)) throw std::invalid_argument("richardson: t_start must be positive");
  if (options.levels < 1) throw std::invalid_argument("richardson: need at least one level");

  auto eval = [&](double t) {
    const double v = F(t);
    if (!std::isfinite(v)) throw EvaluationError("richardson: non-finite F(" + std::to_string(t) + ")");
    return v;
  };

  const double sign = side == Side::plus ? 1.0 : -1.0;
  const double f0 = eval(t0);
  const auto max_cols = options.exponents.empty() ? std::numeric_limits<std::size_t>::max()
                                                  : options.exponents.size();
  auto factor = [&](std::size_t m) {
    const double g = options.exponents.empty() ? static_cast<double>(m) : options.exponents[m - 1];
    return std::pow(2.0, g) - 1.0;
  };

  std::vector<double> prev, row;
  RichardsonResult best;
  best.error_bound = std::numeric_limits<double>::infinity();
  double last_diag = 0.0;
  double h = options.t_start;
  for (int i = 0; i <= options.levels; ++i, h *= 0.5) {
    row.assign(1, (eval(t0 + sign * h) - f0) / (sign * h));
    const std::size_t cols = std::min<std::size_t>(static_cast<std::size_t>(i), max_cols);
    for (std::size_t m = 1; m <= cols; ++m) row.push_back(row[m - 1] + (row[m - 1] - prev[m - 1]) / factor(m));
    const double diag = row.back();
    if (i == 0) {
      best = {diag, std::numeric_limits<double>::infinity(), 1};
    } else {
      const double inc = std::abs(diag - last_diag);
      if (inc <= best.error_bound) {
        best = {diag, inc, i + 1};
      } else if (i >= 3 && inc > 4.0 * best.error_bound) {
        break;
      }
    }
    last_diag = diag;
    prev = row;
  }
  return best;
}

}  // namespace wdm

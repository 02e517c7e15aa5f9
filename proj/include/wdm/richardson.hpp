#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

namespace wdm {

class EvaluationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class Side { plus, minus };

struct RichardsonOptions {
  double t_start = 0.1;
  int levels = 12;  // J: ladder t_j = t_start 2^-j, j = 0..J
  // Powers γ_1 < γ_2 < ... in the error expansion D(t) = D + Σ c_m t^γ_m of the
  // difference quotient. Empty means 1, 2, 3, ...
  std::vector<double> exponents;
};

struct RichardsonResult {
  double estimate = 0.0;
  double error_bound = 0.0;  // last accepted extrapolation increment
  int levels_used = 0;
};

// One-sided derivative of F at t0 from the difference quotients
// (F(t0 ± t_j) - F(t0)) / (± t_j), extrapolated with a Richardson tableau.
// Stops early once diagonal increments start growing (noise floor).
RichardsonResult richardson_one_sided(const std::function<double(double)>& F, double t0, Side side,
                                      const RichardsonOptions& options = {});

}  // namespace wdm

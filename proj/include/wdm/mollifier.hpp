#pragma once

#include <stdexcept>
#include <vector>

#include "wdm/smooth.hpp"
#include "wdm/taylor.hpp"

namespace wdm {

class ConstructionError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Even plateau bump ψ: ψ ≡ 1 on [-a, a], ψ ≡ 0 for |x| >= s, a smooth
// exp(-1/u) transition in between, and ∫ψ = 1.
//
// On a < |x| < s, with u = (s - |x|) / (s - a) and T(u) = exp(-1/u),
//   ψ(x) = T(u) / (T(u) + T(1 - u)).
// Derivatives of T come from T^(n)(u) = p_n(1/u) T(u) with
// p_0 = 1, p_{n+1}(y) = y^2 (p_n(y) - p_n'(y)); the quotient and chain rule are
// evaluated in Taylor arithmetic.
class Mollifier {
public:
  static constexpr int kDefaultMaxOrder = 8;

  double plateau_half_width() const { return a_; }
  double support_half_width() const { return s_; }
  double shape_ratio() const { return a_ / s_; }
  int max_order() const { return max_order_; }

  double operator()(double x) const;
  Taylor operator()(const Taylor& x) const;

  // ψ(x), ψ'(x), ..., ψ^(order)(x); order <= max_order().
  std::vector<double> derivatives(double x, int order) const;
  double derivative(double x, int k) const;

  // sup_x |ψ^(k)(x)|, precomputed on a dense grid at construction.
  double sup_derivative(int k) const;

  SmoothFunction as_function() const;

private:
  friend Mollifier build_mollifier(double shape_ratio, int max_order);
  Mollifier(double a, double s, int max_order);

  // Normalized Taylor coefficients of the transition σ(u) = T(u)/(T(u)+T(1-u)).
  Taylor transition(double u, int order) const;
  std::vector<double> t_derivatives(double u, int order) const;

  double a_ = 0.0;
  double s_ = 0.0;
  int max_order_ = kDefaultMaxOrder;
  std::vector<std::vector<double>> p_;  // p_n coefficients, ascending powers of y
  std::vector<double> sups_;
};

// Build the unit-mass plateau mollifier with a = r * s. Throws
// std::invalid_argument unless 0 < r < 1, ConstructionError if normalization
// fails.
Mollifier build_mollifier(double shape_ratio, int max_order = Mollifier::kDefaultMaxOrder);

// ψ_ε(x) = ψ(x/ε) / ε
class ScaledMollifier {
public:
  ScaledMollifier(Mollifier base, double eps);

  const Mollifier& base() const { return base_; }
  double epsilon() const { return eps_; }
  double support_half_width() const { return eps_ * base_.support_half_width(); }

  double operator()(double x) const { return base_(x / eps_) / eps_; }
  Taylor operator()(const Taylor& x) const;
  double derivative(double x, int k) const;
  double sup_derivative(int k) const;

  SmoothFunction as_function() const;

private:
  Mollifier base_;
  double eps_;
};

}  // namespace wdm

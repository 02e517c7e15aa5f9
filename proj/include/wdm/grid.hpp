#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "wdm/kernels.hpp"

namespace wdm {

// Thrown when an argument is outside the domain an operation is defined on.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// Thrown when a derivative order beyond what a function provides is requested.
class UnsupportedOrder : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool contains(double x, double tol = 0.0) const { return x >= lo - tol && x <= hi + tol; }
  bool degenerate() const { return lo == hi; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

// Real function sampled at n uniformly spaced points on [x_lo, x_hi].
class GridFunction {
public:
  static constexpr std::size_t kMinSamples = 9;

  GridFunction() = default;
  GridFunction(double x_lo, double x_hi, std::vector<double> values);

  // Sample f on n points.
  static GridFunction sample(const std::function<double(double)>& f, double x_lo, double x_hi, std::size_t n,
                             kernels::Exec exec = kernels::default_exec());
  static GridFunction zeros(double x_lo, double x_hi, std::size_t n);

  double x_lo() const { return x_lo_; }
  double x_hi() const { return x_hi_; }
  std::size_t size() const { return values_.size(); }
  double spacing() const { return (x_hi_ - x_lo_) / static_cast<double>(values_.size() - 1); }
  double x(std::size_t i) const { return x_lo_ + static_cast<double>(i) * spacing(); }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  // Piecewise-linear interpolation; zero outside [x_lo, x_hi].
  double interpolate(double x) const;

  double sup_abs() const;

  GridFunction& operator+=(const GridFunction& o);
  GridFunction& operator*=(double s);

private:
  double x_lo_ = 0.0;
  double x_hi_ = 1.0;
  std::vector<double> values_;
};

// Composite Simpson over the whole grid (3/8 rule on the last three panels when
// the panel count is odd). Exact on cubics.
double quadrature(const GridFunction& f);

// Composite Simpson of a closed-form integrand over [a, b]. Reversed endpoints
// flip the sign; an empty interval gives 0.
double quadrature(const std::function<double(double)>& f, double a, double b, int panels = 4096);

// G(x_i) = ∫_{x_lo}^{x_i} f, fourth-order accurate.
GridFunction cumulative_integral(const GridFunction& f);

// G(x_i) = -∫_{x_i}^{x_hi} f, accumulated from the right end.
GridFunction cumulative_integral_from_right(const GridFunction& f);

// Fourth-order finite-difference derivative (one-sided stencils at the ends).
GridFunction differentiate(const GridFunction& f);

// Pointwise product of two functions on the same grid.
GridFunction multiply(const GridFunction& a, const GridFunction& b);

}  // namespace wdm

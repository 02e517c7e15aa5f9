#pragma once

#include <climits>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wdm/grid.hpp"
#include "wdm/taylor.hpp"

namespace wdm {

// A smooth real function of one variable with exact derivatives, plus an
// optional compact support outside of which it vanishes identically.
class SmoothFunction {
public:
  static constexpr int kUnlimitedOrder = INT_MAX;

  SmoothFunction() = default;
  SmoothFunction(std::function<double(double)> value, std::function<Taylor(const Taylor&)> jet, std::string name,
                 std::optional<Interval> support = std::nullopt, int max_order = kUnlimitedOrder)
      : value_(std::move(value)),
        jet_(std::move(jet)),
        name_(std::move(name)),
        support_(support),
        max_order_(max_order) {}

  // Wrap a callable that is generic over double and Taylor.
  template <class F>
  static SmoothFunction generic(F f, std::string name, std::optional<Interval> support = std::nullopt,
                                int max_order = kUnlimitedOrder) {
    return SmoothFunction([f](double x) { return f(x); }, [f](const Taylor& x) { return f(x); },
                          std::move(name), support, max_order);
  }

  double operator()(double x) const {
    if (support_ && !support_->contains(x)) return 0.0;
    return value_(x);
  }

  Taylor operator()(const Taylor& x) const {
    if (x.order() > max_order_) throw UnsupportedOrder("derivative order " + std::to_string(x.order()) +
                                                       " exceeds what " + name_ + " provides");
    if (support_ && !support_->contains(x.value())) return Taylor::constant(0.0, x.order());
    return jet_(x);
  }

  // f(x), f'(x), ..., f^(order)(x)
  std::vector<double> derivatives(double x, int order) const {
    return (*this)(Taylor::variable(x, order)).derivatives();
  }
  double derivative(double x, int k) const { return derivatives(x, k)[static_cast<std::size_t>(k)]; }

  const std::string& name() const { return name_; }
  const std::optional<Interval>& support() const { return support_; }
  int max_order() const { return max_order_; }
  std::function<double(double)> as_std_function() const {
    return [self = *this](double x) { return self(x); };
  }

private:
  std::function<double(double)> value_;
  std::function<Taylor(const Taylor&)> jet_;
  std::string name_;
  std::optional<Interval> support_;
  int max_order_ = kUnlimitedOrder;
};

// Σ_{j=0..k} sup_K |f^(j)|, with the sup taken over `samples` equispaced points.
double seminorm(const SmoothFunction& f, Interval K, int k, std::size_t samples = 10001,
                kernels::Exec exec = kernels::default_exec());

}  // namespace wdm

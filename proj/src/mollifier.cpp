#include "wdm/mollifier.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace wdm {

namespace {
// exp(-1/u) is below the smallest subnormal for 1/u > 745; cut off earlier so
// p_n(1/u) stays finite.
constexpr double kMaxInverse = 700.0;

double transition_value(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double A = 1.0 / u < kMaxInverse ? std::exp(-1.0 / u) : 0.0;
  const double B = 1.0 / (1.0 - u) < kMaxInverse ? std::exp(-1.0 / (1.0 - u)) : 0.0;
  return A / (A + B);
}

void check_order(int order, int max_order) {
  if (order > max_order)
    throw UnsupportedOrder("mollifier derivative order " + std::to_string(order) + " exceeds K_max = " +
                           std::to_string(max_order));
}
}  // namespace

Mollifier::Mollifier(double a, double s, int max_order) : a_(a), s_(s), max_order_(max_order) {
  p_.push_back({1.0});
  for (int n = 0; n < max_order_; ++n) {
    const auto& p = p_.back();
    // y^2 (p - p')
    std::vector<double> next(p.size() + 2, 0.0);
    for (std::size_t j = 0; j < p.size(); ++j) {
      next[j + 2] += p[j];
      if (j > 0) next[j + 1] -= static_cast<double>(j) * p[j];
    }
    p_.push_back(std::move(next));
  }

  // Derivatives vanish on the plateau and outside the support, so scanning the
  // transition band is enough.
  sups_.assign(static_cast<std::size_t>(max_order_) + 1, 0.0);
  sups_[0] = 1.0;
  constexpr int kScan = 20000;
  for (int i = 0; i <= kScan; ++i) {
    const double x = a_ + (s_ - a_) * i / kScan;
    const auto d = derivatives(x, max_order_);
    for (int k = 1; k <= max_order_; ++k)
      sups_[static_cast<std::size_t>(k)] = std::max(sups_[static_cast<std::size_t>(k)], std::abs(d[static_cast<std::size_t>(k)]));
  }
}

std::vector<double> Mollifier::t_derivatives(double u, int order) const {
  std::vector<double> d(static_cast<std::size_t>(order) + 1, 0.0);
  if (u <= 0.0 || 1.0 / u >= kMaxInverse) return d;
  const double y = 1.0 / u;
  const double e = std::exp(-y);
  for (int n = 0; n <= order; ++n) {
    const auto& p = p_[static_cast<std::size_t>(n)];
    double acc = 0.0;
    for (std::size_t j = p.size(); j-- > 0;) acc = acc * y + p[j];
    d[static_cast<std::size_t>(n)] = acc * e;
  }
  return d;
}

Taylor Mollifier::transition(double u, int order) const {
  auto dA = t_derivatives(u, order);
  auto dB = t_derivatives(1.0 - u, order);
  for (std::size_t n = 1; n < dB.size(); n += 2) dB[n] = -dB[n];
  const Taylor A = Taylor::from_derivatives(dA);
  const Taylor B = Taylor::from_derivatives(dB);
  return A / (A + B);
}

double Mollifier::operator()(double x) const {
  const double ax = std::abs(x);
  if (ax <= a_) return 1.0;
  if (ax >= s_) return 0.0;
  return transition_value((s_ - ax) / (s_ - a_));
}

std::vector<double> Mollifier::derivatives(double x, int order) const {
  check_order(order, max_order_);
  std::vector<double> d(static_cast<std::size_t>(order) + 1, 0.0);
  const double ax = std::abs(x);
  if (ax <= a_) {
    d[0] = 1.0;
    return d;
  }
  if (ax >= s_) return d;
  const Taylor sigma = transition((s_ - ax) / (s_ - a_), order);
  const double du_dx = (x > 0.0 ? -1.0 : 1.0) / (s_ - a_);
  double scale = 1.0;
  for (int n = 0; n <= order; ++n) {
    d[static_cast<std::size_t>(n)] = sigma.derivative(n) * scale;
    scale *= du_dx;
  }
  return d;
}

double Mollifier::derivative(double x, int k) const { return derivatives(x, k)[static_cast<std::size_t>(k)]; }

Taylor Mollifier::operator()(const Taylor& x) const {
  const auto d = derivatives(x.value(), x.order());
  return x.compose(d);
}

double Mollifier::sup_derivative(int k) const {
  check_order(k, max_order_);
  return sups_[static_cast<std::size_t>(k)];
}

SmoothFunction Mollifier::as_function() const {
  const Mollifier self = *this;
  return SmoothFunction([self](double x) { return self(x); }, [self](const Taylor& x) { return self(x); },
                        "psi", Interval{-s_, s_}, max_order_);
}

Mollifier build_mollifier(double shape_ratio, int max_order) {
  if (!(shape_ratio > 0.0 && shape_ratio < 1.0))
    throw std::invalid_argument("mollifier shape ratio must lie in (0, 1)");
  if (max_order < 0) throw std::invalid_argument("mollifier max order must be >= 0");

  // σ(u) + σ(1-u) = 1 gives ∫_a^s ψ = (s - a)/2, hence ∫ψ = s + a = s (1 + r).
  const double s = 1.0 / (1.0 + shape_ratio);
  const double a = shape_ratio * s;
  Mollifier m(a, s, max_order);

  const double mass = 2.0 * (a + quadrature([&](double x) { return m(x); }, a, s, 1 << 14));
  if (!(std::abs(mass - 1.0) <= 1e-10))
    throw ConstructionError("mollifier normalization failed: integral = " + std::to_string(mass));
  return m;
}

ScaledMollifier::ScaledMollifier(Mollifier base, double eps) : base_(std::move(base)), eps_(eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("mollifier scale must lie in (0, 1)");
}

double ScaledMollifier::derivative(double x, int k) const {
  return base_.derivative(x / eps_, k) / std::pow(eps_, k + 1);
}

double ScaledMollifier::sup_derivative(int k) const { return base_.sup_derivative(k) / std::pow(eps_, k + 1); }

Taylor ScaledMollifier::operator()(const Taylor& x) const {
  auto d = base_.derivatives(x.value() / eps_, x.order());
  double scale = 1.0 / eps_;
  for (auto& v : d) {
    v *= scale;
    scale /= eps_;
  }
  return x.compose(d);
}

SmoothFunction ScaledMollifier::as_function() const {
  const ScaledMollifier self = *this;
  const double w = support_half_width();
  return SmoothFunction([self](double x) { return self(x); }, [self](const Taylor& x) { return self(x); },
                        "psi_eps", Interval{-w, w}, base_.max_order());
}

}  // namespace wdm

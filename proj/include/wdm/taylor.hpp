#pragma once

// Truncated Taylor series arithmetic.
//
// A Taylor value holds normalized coefficients c_j = f^(j)(x0) / j! of a
// function around some expansion point, up to a fixed order. Arithmetic on
// these values propagates exact derivative information, so any function
// written generically over `double` / `Taylor` can be differentiated to high
// order without finite differences:
//
//   auto f = [](auto x) { return x * x * exp(-x); };
//   Taylor y = f(Taylor::variable(0.5, 6));
//   double third = y.derivative(3);

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace wdm {

class Taylor {
public:
  Taylor() = default;

  static Taylor constant(double value, int order) {
    Taylor t(order);
    t.c_[0] = value;
    return t;
  }

  // The identity function expanded at x0.
  static Taylor variable(double x0, int order) {
    Taylor t(order);
    t.c_[0] = x0;
    if (order >= 1) t.c_[1] = 1.0;
    return t;
  }

  // Build from derivative values d[j] = f^(j)(x0).
  static Taylor from_derivatives(std::span<const double> d) {
    Taylor t(static_cast<int>(d.size()) - 1);
    double fact = 1.0;
    for (std::size_t j = 0; j < d.size(); ++j) {
      if (j > 0) fact *= static_cast<double>(j);
      t.c_[j] = d[j] / fact;
    }
    return t;
  }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  double value() const { return c_[0]; }
  double coeff(int j) const { return j <= order() ? c_[static_cast<std::size_t>(j)] : 0.0; }
  double& coeff_ref(int j) { return c_[static_cast<std::size_t>(j)]; }

  double derivative(int j) const {
    double fact = 1.0;
    for (int i = 2; i <= j; ++i) fact *= i;
    return coeff(j) * fact;
  }

  std::vector<double> derivatives() const {
    std::vector<double> d(c_.size());
    for (int j = 0; j <= order(); ++j) d[static_cast<std::size_t>(j)] = derivative(j);
    return d;
  }

  Taylor& operator+=(const Taylor& o) {
    check(o);
    for (std::size_t j = 0; j < c_.size(); ++j) c_[j] += o.c_[j];
    return *this;
  }
  Taylor& operator-=(const Taylor& o) {
    check(o);
    for (std::size_t j = 0; j < c_.size(); ++j) c_[j] -= o.c_[j];
    return *this;
  }
  Taylor& operator+=(double s) { c_[0] += s; return *this; }
  Taylor& operator-=(double s) { c_[0] -= s; return *this; }
  Taylor& operator*=(double s) {
    for (auto& v : c_) v *= s;
    return *this;
  }
  Taylor& operator/=(double s) {
    for (auto& v : c_) v /= s;
    return *this;
  }

  friend Taylor operator-(Taylor a) {
    for (auto& v : a.c_) v = -v;
    return a;
  }
  friend Taylor operator+(Taylor a, const Taylor& b) { return a += b; }
  friend Taylor operator-(Taylor a, const Taylor& b) { return a -= b; }
  friend Taylor operator+(Taylor a, double s) { return a += s; }
  friend Taylor operator+(double s, Taylor a) { return a += s; }
  friend Taylor operator-(Taylor a, double s) { return a -= s; }
  friend Taylor operator-(double s, const Taylor& a) { return (-a) += s; }
  friend Taylor operator*(Taylor a, double s) { return a *= s; }
  friend Taylor operator*(double s, Taylor a) { return a *= s; }
  friend Taylor operator/(Taylor a, double s) { return a /= s; }

  friend Taylor operator*(const Taylor& a, const Taylor& b) {
    a.check(b);
    Taylor r(a.order());
    const int n = a.order();
    for (int i = 0; i <= n; ++i) {
      double acc = 0.0;
      for (int j = 0; j <= i; ++j) acc += a.c_[j] * b.c_[i - j];
      r.c_[i] = acc;
    }
    return r;
  }

  friend Taylor operator/(const Taylor& a, const Taylor& b) {
    a.check(b);
    if (b.c_[0] == 0.0) throw std::domain_error("Taylor division by a series with zero constant term");
    Taylor r(a.order());
    const int n = a.order();
    for (int i = 0; i <= n; ++i) {
      double acc = a.c_[i];
      for (int j = 1; j <= i; ++j) acc -= b.c_[j] * r.c_[i - j];
      r.c_[i] = acc / b.c_[0];
    }
    return r;
  }
  friend Taylor operator/(double s, const Taylor& b) { return constant(s, b.order()) / b; }

  Taylor& operator*=(const Taylor& o) { return *this = *this * o; }
  Taylor& operator/=(const Taylor& o) { return *this = *this / o; }

  // Substitute this series (around its own point) into an outer function whose
  // derivatives at value() are `outer[j] = g^(j)(value())`.
  Taylor compose(std::span<const double> outer) const {
    const int n = order();
    Taylor delta = *this;
    delta.c_[0] = 0.0;
    Taylor result = constant(outer.empty() ? 0.0 : outer[0], n);
    Taylor power = constant(1.0, n);
    double fact = 1.0;
    for (int j = 1; j <= n && j < static_cast<int>(outer.size()); ++j) {
      power = power * delta;
      fact *= j;
      const double a = outer[static_cast<std::size_t>(j)] / fact;
      if (a == 0.0) continue;
      for (int i = j; i <= n; ++i) result.c_[i] += a * power.c_[i];
    }
    return result;
  }

private:
  explicit Taylor(int order) : c_(static_cast<std::size_t>(order < 0 ? 0 : order) + 1, 0.0) {}

  void check(const Taylor& o) const {
    if (o.c_.size() != c_.size()) throw std::invalid_argument("Taylor order mismatch");
  }

  std::vector<double> c_{0.0};
};

inline Taylor exp(const Taylor& x) {
  // r' = x' r  =>  k r_k = sum_{j=1..k} j x_j r_{k-j}
  const int n = x.order();
  Taylor r = Taylor::constant(std::exp(x.value()), n);
  for (int k = 1; k <= n; ++k) {
    double acc = 0.0;
    for (int j = 1; j <= k; ++j) acc += j * x.coeff(j) * r.coeff(k - j);
    r.coeff_ref(k) = acc / k;
  }
  return r;
}

inline void sincos(const Taylor& x, Taylor& s, Taylor& c) {
  const int n = x.order();
  s = Taylor::constant(std::sin(x.value()), n);
  c = Taylor::constant(std::cos(x.value()), n);
  for (int k = 1; k <= n; ++k) {
    double as = 0.0, ac = 0.0;
    for (int j = 1; j <= k; ++j) {
      as += j * x.coeff(j) * c.coeff(k - j);
      ac -= j * x.coeff(j) * s.coeff(k - j);
    }
    s.coeff_ref(k) = as / k;
    c.coeff_ref(k) = ac / k;
  }
}

inline Taylor sin(const Taylor& x) {
  Taylor s, c;
  sincos(x, s, c);
  return s;
}

inline Taylor cos(const Taylor& x) {
  Taylor s, c;
  sincos(x, s, c);
  return c;
}

inline Taylor pow(const Taylor& x, int m) {
  if (m < 0) return 1.0 / pow(x, -m);
  Taylor r = Taylor::constant(1.0, x.order());
  for (int i = 0; i < m; ++i) r = r * x;
  return r;
}

// Derivatives 0..order of f at x, for f generic over double/Taylor.
template <class F>
std::vector<double> derivatives_at(F&& f, double x, int order) {
  return f(Taylor::variable(x, order)).derivatives();
}

}  // namespace wdm

#include "wdm/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace wdm {

namespace {
void require_same_grid(const GridFunction& a, const GridFunction& b) {
  if (a.size() != b.size() || a.x_lo() != b.x_lo() || a.x_hi() != b.x_hi())
    throw std::invalid_argument("grid functions live on different grids");
}
}  // namespace

GridFunction::GridFunction(double x_lo, double x_hi, std::vector<double> values)
    : x_lo_(x_lo), x_hi_(x_hi), values_(std::move(values)) {
  if (values_.size() < kMinSamples)
    throw std::invalid_argument("GridFunction needs at least " + std::to_string(kMinSamples) + " samples");
  if (!(x_hi_ > x_lo_)) throw std::invalid_argument("GridFunction needs x_hi > x_lo");
}

GridFunction GridFunction::sample(const std::function<double(double)>& f, double x_lo, double x_hi,
                                  std::size_t n, kernels::Exec exec) {
  GridFunction g = zeros(x_lo, x_hi, n);
  kernels::sample(f, x_lo, g.spacing(), g.values_, exec);
  return g;
}

GridFunction GridFunction::zeros(double x_lo, double x_hi, std::size_t n) {
  return GridFunction(x_lo, x_hi, std::vector<double>(n, 0.0));
}

double GridFunction::interpolate(double x) const {
  if (x < x_lo_ || x > x_hi_) return 0.0;
  const double s = (x - x_lo_) / spacing();
  auto i = static_cast<std::size_t>(s);
  if (i >= values_.size() - 1) return values_.back();
  const double w = s - static_cast<double>(i);
  return (1.0 - w) * values_[i] + w * values_[i + 1];
}

double GridFunction::sup_abs() const { return kernels::max_abs(values_); }

GridFunction& GridFunction::operator+=(const GridFunction& o) {
  require_same_grid(*this, o);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  return *this;
}

GridFunction& GridFunction::operator*=(double s) {
  for (auto& v : values_) v *= s;
  return *this;
}

double quadrature(const GridFunction& f) {
  const auto v = f.values();
  const std::size_t panels = v.size() - 1;
  const double h = f.spacing();
  std::size_t simpson_end = panels % 2 == 0 ? panels : panels - 3;
  double acc = v[0] + v[simpson_end];
  for (std::size_t i = 1; i < simpson_end; ++i) acc += (i % 2 ? 4.0 : 2.0) * v[i];
  acc *= h / 3.0;
  if (simpson_end != panels) {
    const std::size_t i = simpson_end;
    acc += 3.0 * h / 8.0 * (v[i] + 3.0 * v[i + 1] + 3.0 * v[i + 2] + v[i + 3]);
  }
  return acc;
}

double quadrature(const std::function<double(double)>& f, double a, double b, int panels) {
  if (a == b) return 0.0;
  if (b < a) return -quadrature(f, b, a, panels);
  const int n = std::max(2, panels + (panels % 2));
  const double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int j = 1; j < n; ++j) acc += (j % 2 ? 4.0 : 2.0) * f(a + j * h);
  return acc * h / 3.0;
}

namespace {
// ∫ over [x_i, x_{i+1}] from the cubic through four neighbouring samples.
double panel_integral(std::span<const double> v, std::size_t i, double h) {
  const std::size_t n = v.size();
  if (i >= 1 && i + 2 < n) return h / 24.0 * (-v[i - 1] + 13.0 * v[i] + 13.0 * v[i + 1] - v[i + 2]);
  if (i == 0) return h / 24.0 * (9.0 * v[0] + 19.0 * v[1] - 5.0 * v[2] + v[3]);
  return h / 24.0 * (9.0 * v[i + 1] + 19.0 * v[i] - 5.0 * v[i - 1] + v[i - 2]);
}
}  // namespace

GridFunction cumulative_integral(const GridFunction& f) {
  GridFunction g = GridFunction::zeros(f.x_lo(), f.x_hi(), f.size());
  const double h = f.spacing();
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < f.size(); ++i) {
    acc += panel_integral(f.values(), i, h);
    g[i + 1] = acc;
  }
  return g;
}

GridFunction cumulative_integral_from_right(const GridFunction& f) {
  GridFunction g = GridFunction::zeros(f.x_lo(), f.x_hi(), f.size());
  const double h = f.spacing();
  double acc = 0.0;
  for (std::size_t i = f.size() - 1; i > 0; --i) {
    acc -= panel_integral(f.values(), i - 1, h);
    g[i - 1] = acc;
  }
  return g;
}

GridFunction differentiate(const GridFunction& f) {
  const auto v = f.values();
  const std::size_t n = v.size();
  const double h = f.spacing();
  GridFunction d = GridFunction::zeros(f.x_lo(), f.x_hi(), n);
  for (std::size_t i = 2; i + 2 < n; ++i) d[i] = (v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]) / (12.0 * h);
  // one-sided fourth-order stencils
  auto fwd = [&](std::size_t i) {
    return (-25.0 * v[i] + 48.0 * v[i + 1] - 36.0 * v[i + 2] + 16.0 * v[i + 3] - 3.0 * v[i + 4]) / (12.0 * h);
  };
  auto bwd = [&](std::size_t i) {
    return (25.0 * v[i] - 48.0 * v[i - 1] + 36.0 * v[i - 2] - 16.0 * v[i - 3] + 3.0 * v[i - 4]) / (12.0 * h);
  };
  auto fwd1 = [&](std::size_t i) {
    return (-3.0 * v[i - 1] - 10.0 * v[i] + 18.0 * v[i + 1] - 6.0 * v[i + 2] + v[i + 3]) / (12.0 * h);
  };
  auto bwd1 = [&](std::size_t i) {
    return (3.0 * v[i + 1] + 10.0 * v[i] - 18.0 * v[i - 1] + 6.0 * v[i - 2] - v[i - 3]) / (12.0 * h);
  };
  d[0] = fwd(0);
  d[1] = fwd1(1);
  d[n - 1] = bwd(n - 1);
  d[n - 2] = bwd1(n - 2);
  return d;
}

GridFunction multiply(const GridFunction& a, const GridFunction& b) {
  require_same_grid(a, b);
  GridFunction r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] *= b[i];
  return r;
}

}  // namespace wdm

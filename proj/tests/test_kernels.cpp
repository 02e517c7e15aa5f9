#include "doctest.h"

#include <cmath>
#include <cstring>
#include <stdexcept>
#include <vector>

#include "wdm/admissibility.hpp"
#include "wdm/distributions.hpp"
#include "wdm/kernels.hpp"
#include "wdm/mollifier.hpp"

using namespace wdm;

namespace {

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

bool bitwise_equal(double a, double b) { return std::memcmp(&a, &b, sizeof(double)) == 0; }

}  // namespace

TEST_CASE("serial and OpenMP kernels agree bitwise") {
  const kernels::Fn1 f = [](double x) { return std::sin(3.0 * x) * std::exp(-x * x); };
  for (std::size_t n : {1u, 7u, 1000u, 100003u}) {
    INFO(n);
    std::vector<double> s(n), p(n);
    kernels::serial::sample(f, -2.0, 4.0 / static_cast<double>(n), s);
    kernels::omp::sample(f, -2.0, 4.0 / static_cast<double>(n), p);
    CHECK(bitwise_equal(s, p));

    const auto g = [&](std::size_t i) { return std::cos(0.001 * static_cast<double>(i * i)); };
    kernels::serial::evaluate(g, s);
    kernels::omp::evaluate(g, p);
    CHECK(bitwise_equal(s, p));
    CHECK(bitwise_equal(kernels::serial::max_abs(s), kernels::omp::max_abs(p)));
  }
  CHECK(kernels::serial::max_abs(std::vector<double>{}) == 0.0);
  CHECK(kernels::omp::max_abs(std::vector<double>{}) == 0.0);
  CHECK(kernels::omp::max_abs(std::vector<double>{1.0, -3.5, 2.0}) == 3.5);

  const kernels::Fn1 kernel = [](double u) { return std::abs(u) < 0.1 ? 1.0 - 100.0 * u * u : 0.0; };
  const kernels::Fn1 density = [](double y) { return 1.0 + y * y; };
  for (int panels : {8, 63, 256}) {
    INFO(panels);
    // windows both clipped by [a, b] and fully inside it
    std::vector<double> s(5001, 0.5), p(5001, 0.5);
    kernels::serial::convolve_piece(kernel, 0.1, density, -0.3, 0.7, -0.5, 0.0003, panels, s);
    kernels::omp::convolve_piece(kernel, 0.1, density, -0.3, 0.7, -0.5, 0.0003, panels, p);
    CHECK(bitwise_equal(s, p));
  }
}

TEST_CASE("convolve_piece computes the clipped convolution") {
  // kernel 1 on [-w, w], density 1 on [a, b]: the overlap length
  const kernels::Fn1 one = [](double) { return 1.0; };
  const double w = 0.1, a = 0.0, b = 1.0;
  std::vector<double> out(301, 0.0);
  kernels::convolve_piece(one, w, one, a, b, -0.5, 0.01, 64, out);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double x = -0.5 + 0.01 * static_cast<double>(i);
    const double overlap = std::max(0.0, std::min(b, x + w) - std::max(a, x - w));
    CHECK(out[i] == doctest::Approx(overlap).epsilon(1e-12));
  }
}

TEST_CASE("exceptions inside parallel loops reach the caller") {
  std::vector<double> out(10000);
  const kernels::Fn1 bad = [](double x) -> double {
    if (x > 0.5) throw std::domain_error("boom");
    return x;
  };
  CHECK_THROWS_AS(kernels::omp::sample(bad, 0.0, 1e-4, out), std::domain_error);
  CHECK_THROWS_AS(kernels::serial::sample(bad, 0.0, 1e-4, out), std::domain_error);
  std::vector<double> conv(1000);
  CHECK_THROWS_AS(kernels::omp::convolve_piece(bad, 0.1, bad, 0.0, 1.0, 0.0, 1e-3, 16, conv), std::domain_error);
}

TEST_CASE("module results do not depend on the execution policy") {
  const ScaledMollifier psi(build_mollifier(0.5), 0.05);
  const StructuredDistribution eta(
      {{0.2, 2, 0.7}, {-0.4, 0, 1.0}},
      Density::closed_form({-0.5, 0.5}, [](double x) { return 1.0 + x; }, "1+x"));
  const GridSpec grid = grid_covering(support_of(eta), psi.support_half_width(), 1e-3);
  const GridFunction s = convolve_mollifier(psi, eta, grid, kernels::Exec::serial);
  const GridFunction p = convolve_mollifier(psi, eta, grid, kernels::Exec::parallel);
  REQUIRE(s.size() == p.size());
  for (std::size_t i = 0; i < s.size(); ++i) REQUIRE(bitwise_equal(s[i], p[i]));

  FalsifyOptions o;
  o.budget = 2000;
  o.seed = 3;
  const auto mu = RadonMeasureSpec::uniform(-0.5, 0.5);
  const auto third = StructuredDistribution::derivative_of_delta(0.8, 3);
  o.exec = kernels::Exec::serial;
  const auto cs = falsify(mu, third, o);
  o.exec = kernels::Exec::parallel;
  const auto cp = falsify(mu, third, o);
  REQUIRE(cs.has_value());
  REQUIRE(cp.has_value());
  CHECK(cs->spec.describe() == cp->spec.describe());
  CHECK(bitwise_equal(cs->value, cp->value));
}

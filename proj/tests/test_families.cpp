#include "doctest.h"

#include <cmath>

#include "wdm/families.hpp"

using namespace wdm;

namespace {

const Mollifier& psi() {
  static const Mollifier m = build_mollifier(0.5);
  return m;
}

}  // namespace

TEST_CASE("explicit family density") {
  const auto& m = psi();
  for (double x : {-0.6, -0.5, -0.2, 0.0, 0.3, 0.49, 0.7}) CHECK(explicit_density(x, 0.0, 1, 0.5, m) == (std::abs(x) <= 0.5 ? 1.0 : 0.0));

  for (int k = 1; k <= 3; ++k) {
    const double q = 0.5;
    const double t_max = max_valid_t(k, q, m);
    CHECK(t_max > 0.0);
    const auto fam = explicit_family(k, q, m);
    CHECK(fam.t_max() == t_max);
    for (double frac : {0.99, 0.5, 0.1, -0.5, -0.99}) {
      const double t = frac * t_max;
      double low = INFINITY;
      for (int i = 0; i <= 100000; ++i) low = std::min(low, explicit_density(-0.5 + i / 100000.0, t, k, q, m));
      INFO("k " << k << " t " << t);
      CHECK(low >= -1e-12);
      CHECK_NOTHROW(fam.at(t));
      // the perturbation has zero mass
      const auto one = SmoothFunction::generic([](auto x) { return 0.0 * x + 1.0; }, "1");
      CHECK(std::abs(fam.integrate(one, t) - 1.0) <= 1e-8);
      CHECK(std::abs(fam.at(t).total_mass() - 1.0) <= 1e-8);
    }
    CHECK_THROWS_AS(fam.at(1.01 * t_max), DomainError);
  }
}

TEST_CASE("max_valid_t: amplitude-binding case goes negative just past t_max") {
  const auto& m = psi();
  const int k = 1;
  const double q = 0.5;
  const double amplitude = std::pow(m.sup_derivative(k), -1.0 / q);
  REQUIRE(max_valid_t(k, q, m) == amplitude);
  const double t = 1.01 * amplitude;
  double low = INFINITY;
  for (int i = 0; i <= 100000; ++i) low = std::min(low, explicit_density(-0.5 + i / 100000.0, t, k, q, m));
  CHECK(low < 0.0);

  // |U|/(2s) < 1, so the containment bound shrinks as q approaches 1
  double prev = INFINITY;
  for (double qq = 0.5; qq < 0.96; qq += 0.05) {
    const double cont = std::pow(1.0 / (2.0 * m.support_half_width()), (k + 1) / (1.0 - qq));
    CHECK(cont < prev);
    prev = cont;
    CHECK(max_valid_t(k, qq, m) <= cont);
  }
}

TEST_CASE("explicit family weak derivative over the battery") {
  const auto battery = standard_battery(psi());
  REQUIRE(battery.size() == 10);
  for (int k = 1; k <= 3; ++k) {
    const auto rows = verify_weak_derivative(explicit_family(k, 0.5, psi()), battery);
    for (const auto& r : rows) {
      INFO("k " << k << " " << r.phi << " estimate " << r.estimate << " target " << r.target);
      CHECK(r.rel_err <= 1e-2);
    }
  }
}

TEST_CASE("explicit family, k = 2: h(0) = φ''(0)") {
  // φ = (1 - x²) on the plateau of a wide bump: φ''(0) = -2
  const Mollifier m = psi();
  const auto phi = SmoothFunction::generic([m](auto x) { return (1.0 - x * x) * m(x / 3.0); }, "1-x^2");
  const auto rows = verify_weak_derivative(explicit_family(2, 0.5, psi()), {phi});
  CHECK(rows[0].target == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(std::abs(rows[0].estimate + 2.0) <= 2e-2);
}

TEST_CASE("delta family") {
  const auto fam = delta_family();
  const Mollifier m = psi();
  const auto sq = SmoothFunction::generic([](auto x) { return x * x; }, "x^2");
  CHECK(fam.integrate(sq, 0.3) == doctest::Approx(0.09));
  auto rows = verify_weak_derivative(fam, {sq});
  CHECK(std::abs(rows[0].estimate) <= 1e-8);
  const auto s3 = SmoothFunction::generic([](auto x) { return sin(3.0 * x); }, "sin3x");
  rows = verify_weak_derivative(fam, {s3});
  CHECK(std::abs(rows[0].estimate - 3.0) <= 1e-8);
  for (const auto& r : verify_weak_derivative(fam, standard_battery(psi()))) {
    INFO(r.phi);
    CHECK(r.abs_err <= 1e-8);
  }
}

TEST_CASE("scaling family and normalization") {
  const auto mu = RadonMeasureSpec::dirac(0.0);
  const Mollifier m = psi();
  const auto flat = SmoothFunction::generic([m](auto x) { return m(x); }, "plateau");
  auto rows = verify_weak_derivative(scaling_family(mu, 2.0), {flat});
  CHECK(rows[0].estimate == doctest::Approx(2.0).epsilon(1e-10));
  rows = verify_weak_derivative(scaling_family(mu, 0.0), {flat});
  CHECK(rows[0].estimate == 0.0);

  const auto norm = normalize_to_probability(scaling_family(mu, 2.0));
  CHECK(norm.target().is_zero());
  rows = verify_weak_derivative(norm, standard_battery(psi()));
  for (const auto& r : rows) CHECK(std::abs(r.estimate) <= 1e-10);
  CHECK(norm.at(0.3).total_mass() == doctest::Approx(1.0));

  const auto exp_norm = normalize_to_probability(explicit_family(1, 0.5, psi()));
  CHECK(exp_norm.target().atoms().size() == 1);
  CHECK(exp_norm.target().atoms()[0].coeff == doctest::Approx(-1.0).epsilon(1e-12));

  const auto lin = normalize_to_probability(linear_family(mu, RadonMeasureSpec::dirac(1.0)));
  CHECK(lin.one_sided());
  CHECK(total_action_on_one(lin.target()) == 0.0);
  const auto phi = standard_battery(psi())[0];
  rows = verify_weak_derivative(lin, {phi});
  CHECK(rows[0].target == doctest::Approx(phi(1.0) - phi(0.0)).epsilon(1e-14));
  CHECK(rows[0].abs_err <= 1e-8);
  CHECK_THROWS_AS(lin.at(-0.1), DomainError);
  WeakDerivativeOptions minus;
  minus.side = Side::minus;
  CHECK_THROWS_AS(verify_weak_derivative(lin, {phi}, minus), DomainError);

  CHECK_THROWS_AS(normalize_to_probability(scaling_family(RadonMeasureSpec::with_declared_support(SupportSet::point(0)), 1.0)),
                  DomainError);
}

#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "wdm/distributions.hpp"
#include "wdm/spec_io.hpp"

using namespace wdm;

namespace {

const Mollifier& psi() {
  static const Mollifier m = build_mollifier(0.5);
  return m;
}

// x^2 times a plateau bump that is ≡ 1 on [c-1, c+1]
SmoothFunction square_times_plateau(double c) {
  const Mollifier m = psi();
  return SmoothFunction::generic([m, c](auto x) { return x * x * m((x - c) / 3.0); }, "x^2*bump",
                                 Interval{c - 2.0, c + 2.0});
}

}  // namespace

TEST_CASE("SupportSet canonical form and queries") {
  SupportSet s({{2.0, 3.0}, {0.0, 0.0}, {2.5, 4.0}, {5.0, 5.0}, {4.0, 4.5}});
  REQUIRE(s.intervals().size() == 3);
  CHECK(s.intervals()[0] == Interval{0.0, 0.0});
  CHECK(s.intervals()[1] == Interval{2.0, 4.5});
  CHECK(s.intervals()[2] == Interval{5.0, 5.0});
  CHECK(s.classify(0.0) == SupportSet::PointKind::isolated);
  CHECK(s.classify(2.0) == SupportSet::PointKind::boundary);
  CHECK(s.classify(3.0) == SupportSet::PointKind::interior);
  CHECK(s.classify(1.0) == SupportSet::PointKind::outside);
  CHECK(s.gaps().size() == 2);
  CHECK(s.distance(1.5) == doctest::Approx(0.5));
  CHECK(SupportSet::parse(s.to_string()) == s);
  CHECK(SupportSet::parse(" [0, 1] ; [2,3]") == SupportSet({{0, 1}, {2, 3}}));
  CHECK_THROWS(SupportSet::parse("[0,1] junk"));
  CHECK(s.includes(SupportSet::interval(2.2, 4.0)));
  CHECK_FALSE(s.includes(SupportSet::interval(1.0, 2.2)));
}

TEST_CASE("atoms merge and zero coefficients drop") {
  StructuredDistribution eta({{0.0, 1, 2.0}, {0.0, 1, -2.0}, {1.0, 0, 1.0}, {1.0, 0, 0.5}, {1.0, 2, 0.0}});
  REQUIRE(eta.atoms().size() == 1);
  CHECK(eta.atoms()[0].coeff == 1.5);
  CHECK(eta.order() == 0);
  CHECK(StructuredDistribution::derivative_of_delta(0.0, 5).order() == 5);
}

TEST_CASE("pair follows the derivative sign convention") {
  auto sin3 = SmoothFunction::generic([](auto x) { return sin(3.0 * x); }, "sin3x");
  CHECK(pair(StructuredDistribution::derivative_of_delta(0.0, 1, -1.0), sin3) == doctest::Approx(3.0));
  CHECK(pair(StructuredDistribution::delta(0.0), square_times_plateau(0.0)) == 0.0);
  CHECK(pair(StructuredDistribution::derivative_of_delta(1.0, 2, 2.0), square_times_plateau(1.0)) ==
        doctest::Approx(4.0).epsilon(1e-14));

  // density part: ∫_0^1 x dx against a uniform density of mass 2 on [0,1]
  auto id = SmoothFunction::generic([](auto x) { return x; }, "x");
  CHECK(pair(StructuredDistribution::from_density(Density::uniform(0.0, 1.0, 2.0)), id) ==
        doctest::Approx(1.0).epsilon(1e-13));

  auto limited = psi().as_function();
  CHECK_THROWS_AS(pair(StructuredDistribution::derivative_of_delta(0.5, 9), limited), UnsupportedOrder);
}

TEST_CASE("pair is linear in both slots") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  auto f = SmoothFunction::generic([](auto x) { return exp(0.3 * x) * cos(x); }, "f");
  auto g = SmoothFunction::generic([](auto x) { return 1.0 / (3.0 + x * x); }, "g");
  for (int trial = 0; trial < 50; ++trial) {
    StructuredDistribution a({{U(rng), trial % 4, U(rng)}, {U(rng), 0, U(rng)}}, Density::uniform(-1, 0.5, U(rng)));
    StructuredDistribution b({{U(rng), (trial + 1) % 3, U(rng)}}, Density::uniform(0, 2, U(rng)));
    const double s = U(rng), t = U(rng);
    const double lhs = pair(s * a + t * b, f);
    CHECK(std::abs(lhs - (s * pair(a, f) + t * pair(b, f))) <= 1e-10);
    const double alpha = U(rng);
    auto combo = SmoothFunction::generic([alpha](auto x) { return exp(0.3 * x) * cos(x) + alpha / (3.0 + x * x); },
                                         "f+ag");
    CHECK(std::abs(pair(a, combo) - (pair(a, f) + alpha * pair(a, g))) <= 1e-10);
  }
}

TEST_CASE("total_action_on_one") {
  StructuredDistribution ab({{0.0, 1, 0.7}, {0.0, 2, 1.3}});
  CHECK(total_action_on_one(ab) == 0.0);
  CHECK(total_action_on_one(StructuredDistribution::delta(0.0)) == 1.0);
  CHECK(total_action_on_one(StructuredDistribution::from_density(Density::uniform(-0.2, 0.4, 0.7))) ==
        doctest::Approx(0.7).epsilon(1e-14));
}

TEST_CASE("support_of") {
  CHECK(support_of(StructuredDistribution::derivative_of_delta(0.0, 1)) == SupportSet::point(0.0));
  CHECK(support_of(RadonMeasureSpec::uniform(-0.5, 0.5)) == SupportSet::interval(-0.5, 0.5));
  const auto mixed = StructuredDistribution::delta(0.0) + StructuredDistribution::from_density(Density::uniform(1, 2));
  CHECK(support_of(mixed) == SupportSet({{0, 0}, {1, 2}}));
  const auto declared = RadonMeasureSpec::with_declared_support(SupportSet::interval(0, 1));
  CHECK(declared.support_is_declared());
  CHECK(support_of(declared) == SupportSet::interval(0, 1));
  CHECK_THROWS_AS(RadonMeasureSpec({}, {{0.0, -1.0}}), DomainError);
  CHECK_THROWS_AS(RadonMeasureSpec(Density::uniform(0, 1, -1.0), {}), DomainError);
  CHECK_THROWS_AS(RadonMeasureSpec({}, {{3.0, 1.0}}, SupportSet::interval(0, 1)), DomainError);
}

TEST_CASE("convolve_mollifier on delta derivatives is exact") {
  const double eps = 0.1;
  const ScaledMollifier pe(psi(), eps);
  for (int k = 0; k <= 3; ++k) {
    const double sign = k % 2 ? -1.0 : 1.0;
    const auto g = convolve_mollifier(pe, StructuredDistribution::derivative_of_delta(0.0, k, sign));
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(g[i] == sign * pe.derivative(g.x(i), k));
  }
  const auto g = convolve_mollifier(pe, StructuredDistribution::delta(0.0));
  CHECK(std::abs(quadrature(g) - 1.0) <= 1e-10);
}

TEST_CASE("convolve_mollifier support stays within supp eta dilated by eps*s") {
  const double eps = 0.05;
  const ScaledMollifier pe(psi(), eps);
  const auto eta = StructuredDistribution({{0.0, 2, 1.0}, {1.5, 0, -2.0}}, Density::uniform(0.4, 0.8, 0.3));
  const auto allowed = support_of(eta).dilated(pe.support_half_width());
  const auto g = convolve_mollifier(pe, eta, grid_covering(support_of(eta), 0.2, 1e-3));
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g[i] != 0.0) CHECK(allowed.contains(g.x(i)));
  // the uniform piece is reproduced away from its edges
  CHECK(g.interpolate(0.6) == doctest::Approx(0.3 / 0.4).epsilon(1e-10));
}

TEST_CASE("mollified atoms are associated with the distribution") {
  auto phi = SmoothFunction::generic([](auto x) { return exp(x) * cos(2.0 * x) + x * x * x; }, "phi");
  const StructuredDistribution eta({{0.0, 0, 1.0}, {0.2, 1, -0.5}, {-0.3, 2, 0.25}});
  const double target = pair(eta, phi);
  double prev = INFINITY;
  for (double eps : {0.2, 0.05, 0.0125}) {
    const ScaledMollifier pe(psi(), eps);
    const auto g = convolve_mollifier(pe, eta);
    const double residual = std::abs(quadrature(multiply(g, GridFunction::sample(phi.as_std_function(), g.x_lo(),
                                                                                    g.x_hi(), g.size()))) -
                                     target);
    CHECK(residual < prev);
    prev = residual;
  }
  CHECK(prev <= 1e-3 * std::abs(target));
}

TEST_CASE("spec files") {
  std::istringstream in(R"(# example
name = mixed
atom = 0, 1, -1.5
atom = 0.5, 0, 2
density = uniform, 1, 2, 0.5
support = [0,0];[1,2]
)");
  const auto spec = parse_spec(in, ".", "inline");
  CHECK(spec.name == "mixed");
  const auto eta = to_distribution(spec);
  CHECK(eta.atoms().size() == 2);
  CHECK(total_action_on_one(eta) == doctest::Approx(2.5));
  CHECK_THROWS_AS(to_measure(spec), SpecError);

  std::istringstream bad("colour = blue\n");
  CHECK_THROWS_AS(parse_spec(bad, ".", "inline"), SpecError);
  std::istringstream bad_num("atom = 0, one, 1\n");
  CHECK_THROWS_AS(parse_spec(bad_num, ".", "inline"), SpecError);
  CHECK_THROWS_AS(read_spec_file("/nonexistent/mu.spec"), SpecError);

  const auto dir = std::filesystem::temp_directory_path() / "wdm_spec_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream csv(dir / "tri.csv");
    csv << "x,value\n";
    for (int i = 0; i <= 20; ++i) csv << (i / 20.0) << ',' << (i <= 10 ? i / 10.0 : (20 - i) / 10.0) << '\n';
    std::ofstream mu(dir / "mu.spec");
    mu << "density = grid, tri.csv\natom = 2, 0, 0.5\n";
  }
  const auto mu = to_measure(read_spec_file(dir / "mu.spec"));
  CHECK(mu.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mu.support() == SupportSet({{0.0, 1.0}, {2.0, 2.0}}));
}

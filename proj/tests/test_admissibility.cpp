#include "doctest.h"

#include <cmath>
#include <random>

#include "support/admissibility_instances.hpp"
#include "wdm/admissibility.hpp"

using namespace wdm;

namespace {

StructuredDistribution d(double p, int k, double c = 1.0) { return StructuredDistribution::derivative_of_delta(p, k, c); }

bool no_rule_failed(const Verdict& v) {
  for (const auto& r : v.trace)
    if (!r.satisfied) return false;
  return true;
}

}  // namespace

TEST_CASE("bump and test function shapes") {
  CHECK(bump(0.0) == 1.0);
  CHECK(bump(1.0) == 0.0);
  CHECK(bump(-0.999999) == 0.0);
  const auto j = bump(Taylor::variable(0.0, 4)).derivatives();
  CHECK(j[1] == 0.0);
  CHECK(j[2] == doctest::Approx(-2.0));  // β(u) = 1 - u² + O(u⁴)

  const TestFunctionSpec pinned{TestFunctionSpec::Kind::pinned_bump, 0.3, 0.1, 1, 9.0};
  const auto f = pinned.function();
  for (int i = 0; i <= 400; ++i) CHECK(f(0.2 + 0.2 * i / 400.0) >= 0.0);
  const auto dv = f.derivatives(0.3, 3);
  CHECK(dv[0] == 0.0);
  CHECK(dv[1] == 0.0);
  CHECK(dv[2] == doctest::Approx(2.0));
  CHECK(dv[3] == doctest::Approx(6.0 * 9.0));
  CHECK(f(0.41) == 0.0);
}

TEST_CASE("one-sided verdicts on the worked examples") {
  const auto delta0 = RadonMeasureSpec::dirac(0.0);
  const auto nu_pos = StructuredDistribution({{0.7, 0, 0.4}}, Density::uniform(1.0, 2.0, 0.3));
  const auto eta34 = nu_pos + d(0, 1, -1.7) + d(0, 2, 0.8);
  const auto v34 = check_one_sided(delta0, eta34);
  CHECK(v34.admissible);
  CHECK_FALSE(v34.counterexample);

  const auto uniform = RadonMeasureSpec::uniform(-0.5, 0.5);
  CHECK(check_one_sided(uniform, d(0, 5)).admissible);

  const auto v3 = check_one_sided(delta0, d(0, 3));
  CHECK_FALSE(v3.admissible);
  REQUIRE(v3.counterexample);
  CHECK(v3.counterexample->value < -1e-9);

  // order-2 coefficient sign at an isolated point
  CHECK_FALSE(check_one_sided(delta0, d(0, 2, -1.0)).admissible);
  // derivative atoms off the support
  CHECK_FALSE(check_one_sided(uniform, d(0.75, 1)).admissible);
  // endpoints of a nondegenerate interval are flat points
  CHECK(check_one_sided(uniform, d(0.5, 4, -3.0)).admissible);
  // negative density off the support
  CHECK_FALSE(check_one_sided(delta0, StructuredDistribution::from_density(Density::uniform(0.5, 1.0, -0.1))).admissible);
  // negative density inside an interval of the support is fine
  CHECK(check_one_sided(uniform, StructuredDistribution::from_density(Density::uniform(-0.2, 0.2, -1.0))).admissible);
}

TEST_CASE("b = 0 boundary is flagged") {
  const auto v = check_one_sided(RadonMeasureSpec::dirac(0.0), d(0, 2, 1e-12) + d(0, 0, 1.0));
  CHECK(v.admissible);
  bool flagged = false;
  for (const auto& r : v.trace) flagged |= r.note.find("b = 0") != std::string::npos;
  CHECK(flagged);
}

TEST_CASE("two-sided verdicts") {
  const auto delta0 = RadonMeasureSpec::dirac(0.0);
  CHECK(check_two_sided(delta0, d(0, 1, 2.5)).admissible);
  const auto v = check_two_sided(delta0, d(0, 2, 0.7));
  CHECK_FALSE(v.admissible);
  REQUIRE(v.counterexample);
  CHECK(std::abs(v.counterexample->value) > 1e-9);
  // a positive measure off {0} breaks the two-sided condition
  CHECK_FALSE(check_two_sided(delta0, d(0, 1) + d(0.5, 0)).admissible);

  const auto cantor_like = RadonMeasureSpec::with_declared_support(SupportSet::interval(0.0, 1.0));
  for (int k = 0; k <= 6; ++k) CHECK(check_two_sided(cantor_like, d(std::sqrt(2.0) / 2.0, k)).admissible);
}

TEST_CASE("probability constraint") {
  CHECK(check_probability_constraint(d(0, 1, 0.3) + d(0, 2, 1.1)));
  CHECK_FALSE(check_probability_constraint(d(0, 0)));
  CHECK(check_probability_constraint(d(0, 0) - d(1, 0)));
  CheckOptions opt;
  opt.check_probability = true;
  const auto v = check_one_sided(RadonMeasureSpec::dirac(0.0), d(0, 1, 0.3) + d(0, 2, 1.1), opt);
  REQUIRE(v.probability_constraint_ok);
  CHECK(*v.probability_constraint_ok);
}

TEST_CASE("falsify examples") {
  const auto delta0 = RadonMeasureSpec::dirac(0.0);
  const auto cx = falsify(delta0, d(0, 3));
  REQUIRE(cx);
  CHECK(cx->spec.kind == TestFunctionSpec::Kind::pinned_bump);
  CHECK(cx->spec.pin_order == 1);
  CHECK(cx->spec.tilt * cx->spec.width == doctest::Approx(0.5));
  CHECK(cx->value == doctest::Approx(-6.0 * cx->spec.tilt));

  const auto nu_pos = StructuredDistribution({{0.7, 0, 0.4}}, Density::uniform(-1.0, 2.0, 0.3));
  FalsifyOptions small;
  small.budget = 2000;
  CHECK_FALSE(falsify(delta0, nu_pos, small));

  const auto cx2 = falsify(RadonMeasureSpec::uniform(-0.5, 0.5), d(0.75, 0, -1.0));
  REQUIRE(cx2);
  CHECK(cx2->spec.kind == TestFunctionSpec::Kind::free_bump);
  CHECK(cx2->spec.center == 0.75);
  CHECK(cx2->value == doctest::Approx(-1.0));
}

TEST_CASE("falsification candidates are valid test functions") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = testing::random_admissibility_instance(rng);
    FalsifyOptions opt;
    opt.budget = 500;
    opt.seed = static_cast<std::uint64_t>(trial);
    const auto cands = falsification_candidates(inst.mu, inst.eta, opt);
    CHECK(cands.size() <= 500);
    const auto& supp = inst.mu.support();
    for (const auto& c : cands) {
      if (c.kind == TestFunctionSpec::Kind::pinned_bump) {
        CHECK(c.pin_order >= 1);
        CHECK(std::abs(c.tilt) * c.width <= 0.9 + 1e-12);
        CHECK(supp.classify(c.center) == SupportSet::PointKind::isolated);
        CHECK(supp.distance(c.center - c.width) > 0.0);
        CHECK(supp.distance(c.center + c.width) > 0.0);
      } else {
        CHECK(supp.distance(c.center) > c.width);
      }
    }
    // deterministic given the seed
    CHECK(falsification_candidates(inst.mu, inst.eta, opt).size() == cands.size());
  }
}

TEST_CASE("rule engine and falsifier agree on random instances") {
  std::mt19937_64 rng(424242);
  int admissible = 0, refuted = 0, inadmissible = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto inst = testing::random_admissibility_instance(rng);
    INFO("trial " << trial << " mu " << inst.mu_kind << " eta " << inst.eta.describe());
    CheckOptions quiet;
    quiet.seek_counterexample = false;
    const auto one = check_one_sided(inst.mu, inst.eta, quiet);
    const auto neg = check_one_sided(inst.mu, -inst.eta, quiet);
    const auto two = check_two_sided(inst.mu, inst.eta, quiet);
    CHECK(two.admissible == (one.admissible && neg.admissible));
    CHECK(one.admissible == no_rule_failed(one));
    CHECK(check_one_sided(inst.mu, 3.5 * inst.eta, quiet).admissible == one.admissible);

    FalsifyOptions fo;
    fo.budget = 2000;
    fo.seed = static_cast<std::uint64_t>(trial);
    const auto cx = falsify(inst.mu, inst.eta, fo);
    if (one.admissible) {
      ++admissible;
      CHECK_FALSE(cx);
    } else {
      ++inadmissible;
      if (cx) ++refuted;
    }
    if (cx) {
      // soundness: independent re-evaluation reproduces the value
      CHECK(std::abs(pair(inst.eta, cx->spec.function(), cx->panels) - cx->value) <= 1e-12);
      CHECK(cx->value < -kAdmissibilityTol * inst.eta.scale());
    }
  }
  MESSAGE("admissible " << admissible << ", inadmissible " << inadmissible << ", refuted " << refuted);
  CHECK(admissible >= 40);
  CHECK(inadmissible >= 40);
  CHECK(refuted == inadmissible);
}

#pragma once

// Seeded random (μ, η) pairs for rule/oracle agreement checks.

#include <random>
#include <string>
#include <vector>

#include "wdm/distributions.hpp"

namespace wdm::testing {

struct AdmissibilityInstance {
  RadonMeasureSpec mu;
  StructuredDistribution eta;
  std::string mu_kind;
};

// μ is a point mass at 0, uniform on [-1/2, 1/2], or a point mass at -1 plus
// uniform on [0, 1]. η has up to four atoms of order <= 4 placed at isolated,
// interior, endpoint or outside points, plus optionally a uniform density of
// either sign. Half of the atoms are drawn from the admissible shapes so both
// verdicts occur often.
inline AdmissibilityInstance random_admissibility_instance(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> kind3(0, 2), kind4(0, 3), order(0, 4), natoms(1, 4);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto sign = [&] { return U(rng) < 0.5 ? -1.0 : 1.0; };
  auto mag = [&] { return 0.1 + 1.9 * U(rng); };

  AdmissibilityInstance inst;
  std::vector<double> isolated;
  Interval body{0.0, 0.0};
  bool has_body = false;
  switch (kind3(rng)) {
    case 0:
      inst.mu = RadonMeasureSpec::dirac(0.0);
      inst.mu_kind = "atom";
      isolated = {0.0};
      break;
    case 1:
      inst.mu = RadonMeasureSpec::uniform(-0.5, 0.5);
      inst.mu_kind = "interval";
      body = {-0.5, 0.5};
      has_body = true;
      break;
    default:
      inst.mu = RadonMeasureSpec(Density::uniform(0.0, 1.0, 0.5), {{-1.0, 0.5}});
      inst.mu_kind = "atom+interval";
      isolated = {-1.0};
      body = {0.0, 1.0};
      has_body = true;
      break;
  }
  const SupportSet& supp = inst.mu.support();

  std::vector<Atom> atoms;
  const int n = natoms(rng);
  for (int i = 0; i < n; ++i) {
    const bool tame = U(rng) < 0.5;
    int where = kind4(rng);
    if (where == 0 && isolated.empty()) where = 3;
    if ((where == 1 || where == 2) && !has_body) where = 3;
    Atom a{0.0, order(rng), sign() * mag()};
    switch (where) {
      case 0:
        a.location = isolated[0];
        if (tame) {
          a.order = std::min(a.order, 2);
          if (a.order == 2) a.coeff = std::abs(a.coeff);
        }
        break;
      case 1: a.location = body.lo + (0.1 + 0.8 * U(rng)) * body.length(); break;
      case 2: a.location = U(rng) < 0.5 ? body.lo : body.hi; break;
      default: {
        double x = 0.0;
        do x = -2.0 + 4.0 * U(rng);
        while (supp.distance(x) < 0.05);
        a.location = x;
        if (tame) {
          a.order = 0;
          a.coeff = std::abs(a.coeff);
        }
        break;
      }
    }
    atoms.push_back(a);
  }
  Density density;
  if (U(rng) < 0.5) {
    const bool tame = U(rng) < 0.5;
    double lo = -1.5 + 3.0 * U(rng);
    double len = 0.1 + 0.9 * U(rng);
    if (tame && has_body) {
      lo = body.lo + 0.5 * U(rng) * body.length();
      len = std::min(len, body.hi - lo);
    }
    density = Density::uniform(lo, lo + len, (tame ? 1.0 : sign()) * mag());
  }
  inst.eta = StructuredDistribution(std::move(atoms), std::move(density));
  return inst;
}

}  // namespace wdm::testing

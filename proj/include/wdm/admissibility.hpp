#pragma once

// Whether η can be the one-sided (or two-sided) weak derivative at t = 0 of a
// family of positive measures starting at μ: ⟨η, f⟩ >= 0 (resp. = 0) for every
// nonnegative test function f vanishing on supp μ.
//
// Two independent deciders:
//  * a rule engine (R1..R4 below) that returns a verdict with a trace, and
//  * a falsifier that searches nonnegative bump functions vanishing on supp μ
//    for a violating pairing. It can refute admissibility but never prove it.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wdm/distributions.hpp"
#include "wdm/kernels.hpp"
#include "wdm/smooth.hpp"

namespace wdm {

enum class Mode { one_sided, two_sided };
const char* to_string(Mode m);

// β(u) = exp(1 - 1/(1 - u²)) on |u| < 1, zero elsewhere; β(0) = 1.
// Unlike the plateau mollifier it has nonzero curvature at 0, so low-order
// Taylor coefficients of bumps built from it are all available to the search.
double bump(double u);
Taylor bump(const Taylor& u);

struct TestFunctionSpec {
  enum class Kind { free_bump, pinned_bump };
  Kind kind = Kind::free_bump;
  double center = 0.0;
  double width = 1.0;
  int pin_order = 0;  // m >= 1 for pinned bumps
  double tilt = 0.0;  // |tilt| * width <= 0.9 for pinned bumps

  // free:   β((x - q)/w)
  // pinned: (x - p)^{2m} (1 + c (x - p)) β((x - p)/w)
  SmoothFunction function() const;
  std::string describe() const;
};

struct Counterexample {
  TestFunctionSpec spec;
  double value = 0.0;  // pair(η, f) with `panels` quadrature panels
  int panels = 0;
};

struct RuleFiring {
  std::string rule;     // R1..R4 or "probability"
  std::string subject;  // atom or region it applies to
  bool satisfied = true;
  std::string note;
};

struct Verdict {
  bool admissible = true;
  Mode mode = Mode::one_sided;
  std::optional<bool> probability_constraint_ok;
  std::vector<RuleFiring> trace;
  std::optional<Counterexample> counterexample;
};

struct FalsifyOptions {
  Mode mode = Mode::one_sided;
  std::size_t budget = 10000;
  std::uint64_t seed = 0;
  int panels = 256;          // quadrature panels per density pairing
  double min_width = 1e-4;
  kernels::Exec exec = kernels::default_exec();
};

struct CheckOptions {
  // Run the falsifier to attach a counterexample to inadmissible verdicts.
  bool seek_counterexample = true;
  bool check_probability = false;
  FalsifyOptions falsify;
};

// Relative tolerance applied to scale(η) = Σ|c_j| + ∫|density|.
inline constexpr double kAdmissibilityTol = 1e-9;

// Rule engine:
//  R1  the measure part of η (density and order-0 atoms) must be >= 0 off supp μ;
//  R2  atoms of order >= 1 off supp μ are not allowed;
//  R3  atoms at interior points of supp μ, or at endpoints of its nondegenerate
//      intervals, are unconstrained (every admissible f is flat there);
//  R4  at isolated points p of supp μ the order is at most 2 and the
//      coefficient b of b ∂²δ_p satisfies b >= 0 (b = 0 is flagged).
Verdict check_one_sided(const RadonMeasureSpec& mu, const StructuredDistribution& eta, const CheckOptions& options = {});

// check_one_sided(μ, η) and check_one_sided(μ, -η).
Verdict check_two_sided(const RadonMeasureSpec& mu, const StructuredDistribution& eta, const CheckOptions& options = {});

Verdict check(const RadonMeasureSpec& mu, const StructuredDistribution& eta, Mode mode, const CheckOptions& options = {});

// |<η, 1>| <= 1e-10
bool check_probability_constraint(const StructuredDistribution& eta);

// Candidate test functions in canonical order (pinned bumps at isolated support
// points, free bumps around atoms off supp μ, a grid over complement
// components, then a seeded random sweep), truncated to the budget.
std::vector<TestFunctionSpec> falsification_candidates(const RadonMeasureSpec& mu, const StructuredDistribution& eta,
                                                       const FalsifyOptions& options);

// First candidate with pair(η, f) < -tol (one-sided) or |pair(η, f)| > tol
// (two-sided), tol = 1e-9 scale(η). Absence is not a proof of admissibility.
std::optional<Counterexample> falsify(const RadonMeasureSpec& mu, const StructuredDistribution& eta,
                                      const FalsifyOptions& options = {});

}  // namespace wdm

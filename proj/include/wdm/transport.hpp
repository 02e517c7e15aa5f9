#pragma once

// Mollified representatives f_ε = ψ_ε * μ and g_ε = ψ_ε * η, the 1D solution
// of g_ε + (f_ε v)' = 0, and empirical growth exponents of ε-families.

#include <optional>
#include <string>
#include <vector>

#include "wdm/distributions.hpp"
#include "wdm/mollifier.hpp"

namespace wdm {

// {0.2, 0.1, 0.05, 0.025, 0.0125}
std::vector<double> default_epsilon_ladder();

// Grid for level ε: covers supp μ dilated by εs, spacing
// min(ε_min s / 100, ε s / cells_per_width).
GridSpec transport_grid(const SupportSet& support, const Mollifier& psi, double eps, double eps_min,
                        double cells_per_width);

// f_ε = ψ_ε * μ. Throws DomainError for a measure known only through its
// declared support.
GridFunction smooth_measure(const RadonMeasureSpec& mu, const ScaledMollifier& psi_eps, const GridSpec& grid,
                            kernels::Exec exec = kernels::default_exec());

// g_ε = ψ_ε * η after checking supp η ⊆ supp_mu; the error names the first
// atom or density piece outside.
GridFunction smooth_distribution(const StructuredDistribution& eta, const ScaledMollifier& psi_eps,
                                 const SupportSet& supp_mu, const GridSpec& grid,
                                 kernels::Exec exec = kernels::default_exec());

struct VelocitySolution {
  GridFunction v;
  GridFunction G;             // ∫_{-∞}^x g, accumulated from the nearer end of each mask component
  std::vector<char> mask;     // f > τ max f
  double residual = 0.0;      // sup |g + (f v)'| over mask points whose stencil stays in the mask
  double reconstruction = 0.0;  // sup |f v + G| on the mask
};

// v = -G/f on the mask, 0 elsewhere. Throws DomainError when G does not vanish
// at the right end (no compactly supported solution) or over a zero-density
// gap (support violation).
VelocitySolution solve_velocity(const GridFunction& f, const GridFunction& g, double tau = 1e-8);

struct VelocityOptions {
  std::vector<double> ladder = default_epsilon_ladder();
  double cells_per_width = 4000.0;
  double tau = 1e-8;
  kernels::Exec exec = kernels::default_exec();
};

struct VelocityLevel {
  double eps = 0.0;
  GridFunction f;
  GridFunction g;
  VelocitySolution solution;
  double mass = 0.0;  // ∫f_ε
  double sup_g = 0.0;
  double sup_v = 0.0;
};

// One canonical representative per ε of the ladder.
std::vector<VelocityLevel> velocity_representative(const RadonMeasureSpec& mu, const StructuredDistribution& eta,
                                                   const Mollifier& psi, const VelocityOptions& options = {});

// An ε-indexed family of grid functions.
struct GridFamily {
  std::vector<double> eps;
  std::vector<GridFunction> f;
};

// sup over K ∩ grid of |∂^order f|, derivatives by repeated fourth-order
// differences. An empty intersection gives 0.
double sup_on(const GridFunction& f, Interval K, int order = 0);

struct ModeratenessFit {
  double c = 0.0;
  double N = 0.0;
  double r2 = 0.0;
  std::vector<double> sups;
};

// Least-squares fit log sup_K |∂^I f_ε| = log c + N (-log ε). Needs at least 5
// levels spanning at least 1.5 decades; throws DomainError on zero or
// non-finite sups.
ModeratenessFit moderateness_estimate(const GridFamily& family, Interval K, int order = 0);

struct NegligibilityRow {
  int q = 0;
  bool bounded = false;
  std::vector<double> scaled;  // sup_K |∂^I f_ε| ε^{-q} per level
};

// For q = 0..q_max: bounded when sup·ε^{-q} does not grow along the last three
// levels (relative slack 1e-3).
std::vector<NegligibilityRow> negligibility_test(const GridFamily& family, Interval K, int order, int q_max);

struct AssociationRow {
  std::string phi;
  std::vector<double> residuals;  // |∫φ f_ε - <η, φ>| per level
  bool converging = false;        // strictly decreasing tail and last <= first / 4, or all <= 1e-12
  std::optional<double> observed_order;  // log-log slope against ε
};

std::vector<AssociationRow> verify_association(const GridFamily& family, const StructuredDistribution& target,
                                               const std::vector<SmoothFunction>& battery);

}  // namespace wdm

#pragma once

// Explicit families t ↦ μ_t of positive measures with a known weak derivative
// at t = 0, and a numerical check d/dt ∫φ dμ_t |_{t=0±} = ⟨η, φ⟩.

#include <functional>
#include <string>
#include <vector>

#include "wdm/distributions.hpp"
#include "wdm/mollifier.hpp"
#include "wdm/richardson.hpp"

namespace wdm {

class MeasureFamily {
public:
  using Sampler = std::function<RadonMeasureSpec(double)>;
  using Integrator = std::function<double(const SmoothFunction&, double)>;

  // Valid for |t| < t_max, or 0 <= t < t_max when one_sided.
  MeasureFamily(std::string name, Sampler sampler, Integrator integrate, double t_max, bool one_sided,
                StructuredDistribution target, std::vector<double> error_exponents = {});

  const std::string& name() const { return name_; }
  double t_max() const { return t_max_; }
  bool one_sided() const { return one_sided_; }
  bool valid(double t) const;
  const StructuredDistribution& target() const { return target_; }
  // Powers in the expansion of (∫φ dμ_t - ∫φ dμ_0)/t around its limit; empty
  // means 1, 2, 3, ...
  const std::vector<double>& error_exponents() const { return exponents_; }

  // μ_t; throws DomainError outside the validity interval.
  RadonMeasureSpec at(double t) const;
  // ∫φ dμ_t; throws DomainError outside the validity interval.
  double integrate(const SmoothFunction& phi, double t) const;

private:
  void require_valid(double t) const;

  std::string name_;
  Sampler sampler_;
  Integrator integrate_;
  double t_max_;
  bool one_sided_;
  StructuredDistribution target_;
  std::vector<double> exponents_;
};

// ρ(x, t) = χ_U(x) + (-1)^k sgn(t) |t|^q ψ^(k)(|t|^((q-1)/(k+1)) x), unchecked.
double explicit_density(double x, double t, int k, double q, const Mollifier& psi, Interval U = {-0.5, 0.5});

// min((sup|ψ^(k)|)^(-1/q), (|U| / (2 s))^((k+1)/(1-q)))
double max_valid_t(int k, double q, const Mollifier& psi, Interval U = {-0.5, 0.5});

// Family with density explicit_density, μ_0 = uniform on U and target
// (-1)^k ∂^k δ_0. Requires k >= 1, 0 < q < 1, U symmetric about 0.
MeasureFamily explicit_family(int k, double q, const Mollifier& psi, Interval U = {-0.5, 0.5});

// μ_t = δ_t, target -∂δ_0.
MeasureFamily delta_family();

// μ_t = (1 + c t) μ for |t| < 1/|c|, target c μ.
MeasureFamily scaling_family(const RadonMeasureSpec& mu, double c);

// μ_t = μ + t ν for 0 <= t < t_max, target ν.
MeasureFamily linear_family(const RadonMeasureSpec& mu, const RadonMeasureSpec& nu, double t_max = 1.0);

// μ_t / μ_t(R). Target (η - <η,1> μ_0 / m_0) / m_0 with m_0 = μ_0(R). Throws
// DomainError if the mass of μ_0 vanishes; sampling throws if any mass does.
MeasureFamily normalize_to_probability(const MeasureFamily& family);

struct WeakDerivativeRow {
  std::string phi;
  double estimate = 0.0;
  double target = 0.0;
  double abs_err = 0.0;
  double rel_err = 0.0;  // abs_err / |target|, or abs_err when target = 0
  double error_bound = 0.0;
};

struct WeakDerivativeOptions {
  Side side = Side::plus;
  int levels = 14;
  // Ladder start; default min(t_max / 4, 0.1).
  std::optional<double> t_start;
  kernels::Exec exec = kernels::default_exec();
};

// Richardson estimate of the one-sided derivative of t ↦ ∫φ dμ_t at 0 for each
// φ, compared against pair(target, φ).
std::vector<WeakDerivativeRow> verify_weak_derivative(const MeasureFamily& family,
                                                      const std::vector<SmoothFunction>& battery,
                                                      const WeakDerivativeOptions& options = {});

// Ten test functions g_i(x) ψ((x - c_i)/3): the plateau factor is ≡ 1 on
// |x - c_i| <= 1 (so near 0 each equals its analytic g_i) and makes the
// function compactly supported. ψ must be the r = 1/2 mollifier or wider.
std::vector<SmoothFunction> standard_battery(const Mollifier& psi);

}  // namespace wdm

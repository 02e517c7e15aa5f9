#pragma once

// Finite-order distributions and positive Radon measures on the real line.
//
// Sign convention: <∂^k δ_p, φ> = (-1)^k φ^(k)(p), so -∂δ_0 acts as φ ↦ φ'(0).

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wdm/grid.hpp"
#include "wdm/mollifier.hpp"
#include "wdm/smooth.hpp"

namespace wdm {

// Tolerance for treating two locations as the same point.
inline constexpr double kLocationTol = 1e-12;

// Finite union of closed intervals, kept sorted with strictly positive gaps.
// Degenerate intervals [a, a] are isolated points.
class SupportSet {
public:
  enum class PointKind { outside, interior, boundary, isolated };

  SupportSet() = default;
  explicit SupportSet(std::vector<Interval> intervals);

  static SupportSet point(double p) { return SupportSet({{p, p}}); }
  static SupportSet interval(double a, double b) { return SupportSet({{a, b}}); }
  // "[a1,b1];[a2,b2]"
  static SupportSet parse(const std::string& text);

  const std::vector<Interval>& intervals() const { return intervals_; }
  bool empty() const { return intervals_.empty(); }
  Interval hull() const;

  bool contains(double x, double tol = kLocationTol) const;
  PointKind classify(double x, double tol = kLocationTol) const;
  // Whether every point of `other` lies in this set.
  bool includes(const SupportSet& other, double tol = kLocationTol) const;

  SupportSet united(const SupportSet& other) const;
  SupportSet dilated(double r) const;
  // Bounded open components of the complement, as (lo, hi) pairs.
  std::vector<Interval> gaps() const;
  // Distance from x to the nearest point of the set (0 inside).
  double distance(double x) const;

  std::string to_string() const;

  friend bool operator==(const SupportSet&, const SupportSet&) = default;

private:
  std::vector<Interval> intervals_;
};

// Sum of compactly supported, piecewise smooth pieces.
class Density {
public:
  struct Piece {
    Interval support;
    std::function<double(double)> fn;  // only evaluated on `support`
    std::string label;
    SupportSet nonzero;  // closure of {fn != 0}
  };

  Density() = default;

  // Constant height weight/(b-a) on [a, b] (total mass `weight`).
  static Density uniform(double a, double b, double weight = 1.0);
  // Piecewise-linear interpolation of samples; zero outside the grid.
  static Density grid(GridFunction samples, std::string label = "grid");
  static Density closed_form(Interval support, std::function<double(double)> fn, std::string label);

  const std::vector<Piece>& pieces() const { return pieces_; }
  bool empty() const { return pieces_.empty(); }

  double operator()(double x) const;
  Density scaled(double s) const;
  Density& operator+=(const Density& o);

  double integral(int panels = 4096) const;
  double integral_abs(int panels = 4096) const;
  // ∫ density · f, restricted to f's support when it declares one.
  double integrate_against(const SmoothFunction& f, int panels = 4096) const;
  SupportSet support() const;

private:
  std::vector<Piece> pieces_;
};

// c ∂^k δ_p
struct Atom {
  double location = 0.0;
  int order = 0;
  double coeff = 0.0;
};

class StructuredDistribution {
public:
  StructuredDistribution() = default;
  // Atoms at the same (location, order) are merged, zero coefficients dropped.
  explicit StructuredDistribution(std::vector<Atom> atoms, Density density = {});

  static StructuredDistribution delta(double p, double coeff = 1.0) { return derivative_of_delta(p, 0, coeff); }
  static StructuredDistribution derivative_of_delta(double p, int k, double coeff = 1.0) {
    return StructuredDistribution({{p, k, coeff}});
  }
  static StructuredDistribution from_density(Density d) { return StructuredDistribution({}, std::move(d)); }

  const std::vector<Atom>& atoms() const { return atoms_; }
  const Density& density() const { return density_; }
  int order() const;
  // Σ|c_j| + ∫|density|; reference magnitude for tolerances.
  double scale() const;
  bool is_zero() const { return atoms_.empty() && density_.empty(); }

  StructuredDistribution operator-() const { return scaled(-1.0); }
  StructuredDistribution scaled(double s) const;
  friend StructuredDistribution operator+(const StructuredDistribution& a, const StructuredDistribution& b);
  friend StructuredDistribution operator-(const StructuredDistribution& a, const StructuredDistribution& b) {
    return a + (-b);
  }
  friend StructuredDistribution operator*(double s, const StructuredDistribution& a) { return a.scaled(s); }

  std::string describe() const;

private:
  std::vector<Atom> atoms_;
  Density density_;
};

struct PointMass {
  double location = 0.0;
  double mass = 0.0;
};

// Positive measure: nonnegative density plus nonnegative point masses, with a
// support set that defaults to the closure of where mass sits and may be
// declared larger explicitly (singular-continuous measures).
class RadonMeasureSpec {
public:
  RadonMeasureSpec() = default;
  RadonMeasureSpec(Density density, std::vector<PointMass> masses,
                   std::optional<SupportSet> declared_support = std::nullopt);

  static RadonMeasureSpec dirac(double p, double mass = 1.0) { return RadonMeasureSpec({}, {{p, mass}}); }
  static RadonMeasureSpec uniform(double a, double b, double mass = 1.0) {
    return RadonMeasureSpec(Density::uniform(a, b, mass), {});
  }
  // Measure known only through its support (e.g. Cantor-like constructions).
  static RadonMeasureSpec with_declared_support(SupportSet support) {
    return RadonMeasureSpec({}, {}, std::move(support));
  }

  const Density& density() const { return density_; }
  const std::vector<PointMass>& point_masses() const { return masses_; }
  const SupportSet& support() const { return support_; }
  bool support_is_declared() const { return declared_; }

  double total_mass() const;
  double integrate(const SmoothFunction& phi, int panels = 4096) const;
  StructuredDistribution as_distribution() const;
  RadonMeasureSpec scaled(double s) const;

private:
  Density density_;
  std::vector<PointMass> masses_;
  SupportSet support_;
  bool declared_ = false;
};

// <η, φ> = Σ c_j (-1)^{k_j} φ^(k_j)(p_j) + ∫ density φ
double pair(const StructuredDistribution& eta, const SmoothFunction& phi, int panels = 4096);

// <η, 1>: order-0 atoms plus the density integral.
double total_action_on_one(const StructuredDistribution& eta);

SupportSet support_of(const StructuredDistribution& eta);
SupportSet support_of(const RadonMeasureSpec& mu);

struct GridSpec {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t n = 0;
};

// Grid covering `support` dilated by `half_width` plus a few cells of margin,
// with spacing at most `max_spacing`.
GridSpec grid_covering(const SupportSet& support, double half_width, double max_spacing);

// ψ_ε * η on `grid`: atoms become c ψ_ε^(k)(x - p), density parts are
// convolved numerically.
GridFunction convolve_mollifier(const ScaledMollifier& psi_eps, const StructuredDistribution& eta,
                                const GridSpec& grid, kernels::Exec exec = kernels::default_exec());

// Same, on grid_covering(support_of(η), εs, εs/100).
GridFunction convolve_mollifier(const ScaledMollifier& psi_eps, const StructuredDistribution& eta);

}  // namespace wdm

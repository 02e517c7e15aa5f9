#pragma once

// Tangent and normal cones of convex bodies in R^d (H-polytopes and balls),
// direction classification, and polygonal curves with a prescribed one-sided
// derivative at a point.

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "wdm/grid.hpp"

namespace wdm::cone {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Default tolerance on constraint residuals a_i·p - b_i (and ‖p - c‖ - r).
inline constexpr double kActiveTol = 1e-9;
// Tolerance on θ(v), relative to ‖θ‖‖v‖.
inline constexpr double kDirectionTol = 1e-12;

struct HPolytope {
  Mat A;  // m × d, {x : A x <= b}
  Vec b;
};

struct Ball {
  Vec center;
  double radius = 1.0;
};

class ConvexBody {
public:
  // Throws DomainError unless the polytope is nonempty and bounded.
  static ConvexBody polytope(Mat A, Vec b);
  // Throws DomainError unless radius > 0.
  static ConvexBody ball(Vec center, double radius);
  // [lo, hi]^d
  static ConvexBody box(int d, double lo, double hi);

  bool is_polytope() const { return std::holds_alternative<HPolytope>(body_); }
  const HPolytope& as_polytope() const { return std::get<HPolytope>(body_); }
  const Ball& as_ball() const { return std::get<Ball>(body_); }
  int dim() const;

  // Largest constraint violation (<= 0 inside).
  double residual(const Vec& x) const;
  bool contains(const Vec& x, double tol = kActiveTol) const { return residual(x) <= tol; }
  // Vertices found at construction (polytopes only).
  const std::vector<Vec>& vertices() const { return vertices_; }

private:
  explicit ConvexBody(std::variant<HPolytope, Ball> b) : body_(std::move(b)) {}
  std::variant<HPolytope, Ball> body_;
  std::vector<Vec> vertices_;
};

// Linear functionals θ (as vectors, θ(x) = θ·x) attaining their minimum over C
// at p: negated active rows for polytopes, the inward normal at a boundary
// point of a ball, nothing at interior points.
std::vector<Vec> normal_functionals(const ConvexBody& C, const Vec& p, double active_tol = kActiveTol);

enum class DirectionClass { in_tangent_cone, in_closure_only, outside };
const char* to_string(DirectionClass c);

struct Classification {
  DirectionClass kind = DirectionClass::outside;
  std::vector<Vec> functionals;
  // Most negative θ(v) over the functionals (+inf when there are none).
  double min_theta = 0.0;
  // Functional attaining min_theta when kind == outside.
  std::optional<Vec> certificate;
};

Classification classify_direction(const ConvexBody& C, const Vec& p, const Vec& v, double active_tol = kActiveTol);

// Raised when a curve is requested along a direction outside the closed cone.
class OutsideConeError : public DomainError {
public:
  OutsideConeError(const std::string& what, Vec theta) : DomainError(what), theta_(std::move(theta)) {}
  const Vec& certificate() const { return theta_; }

private:
  Vec theta_;
};

// Points p_j = p + t_j v_j on the ladder t_j = t_1 2^-j with linear
// interpolation in between; c(0) = p and c(t) = p_1 for t >= t_1.
class CurveSample {
public:
  CurveSample(Vec p, std::vector<double> times, std::vector<Vec> points);

  const Vec& origin() const { return p_; }
  const std::vector<double>& times() const { return times_; }
  const std::vector<Vec>& points() const { return points_; }
  Vec operator()(double t) const;

private:
  Vec p_;
  std::vector<double> times_;  // strictly decreasing, > 0
  std::vector<Vec> points_;
};

struct CurveOptions {
  int levels = 60;
  std::optional<double> t_start;  // default chosen from the geometry
};

// Curve in C with c(0) = p and one-sided derivative v at 0. Polytopes and
// inward ball directions use v_j = v; tangent directions at a ball boundary
// use chords v_j = v - δ_j n with δ_j = t_j ‖v‖² / r. Throws
// OutsideConeError with the violating θ when v is outside the closed cone.
CurveSample construct_curve(const ConvexBody& C, const Vec& p, const Vec& v, const CurveOptions& options = {});

// Same ladder with caller-supplied directions v_j = directions(j). Throws
// DomainError if some p + t_j v_j leaves C.
CurveSample construct_curve_from_sequence(const ConvexBody& C, const Vec& p,
                                          const std::function<Vec(int)>& directions, double t_start, int levels);

struct DerivativeCheck {
  std::vector<double> errors;  // ‖(c(t) - p)/t - v‖ per grid point
  double max_error = 0.0;
  // Slope of log error against log t, over errors above the rounding floor.
  std::optional<double> observed_rate;
};

DerivativeCheck verify_curve_derivative(const CurveSample& curve, const Vec& p, const Vec& v,
                                        const std::vector<double>& t_grid);

// t_j = t_start 2^-j for j = j_first..j_last
std::vector<double> geometric_ladder(double t_start, int j_first, int j_last);

}  // namespace wdm::cone

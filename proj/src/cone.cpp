#include "wdm/cone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace wdm::cone {

namespace {

constexpr double kMaxCombinations = 2e6;

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Calls visit(rows) for every k-subset of {0..m-1} in lexicographic order.
template <class Visit>
void for_each_subset(int m, int k, Visit&& visit) {
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  if (k > m) return;
  while (true) {
    visit(idx);
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == m - k + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

Mat rows_of(const Mat& A, const std::vector<int>& rows) {
  Mat S(static_cast<Eigen::Index>(rows.size()), A.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) S.row(static_cast<Eigen::Index>(i)) = A.row(rows[i]);
  return S;
}

std::string format_vec(const Vec& v) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ')';
  return os.str();
}

void require_member(const ConvexBody& C, const Vec& p, double tol) {
  if (p.size() != C.dim()) throw DomainError("point dimension does not match the body");
  const double r = C.residual(p);
  if (r > tol) {
    std::ostringstream os;
    os << "point " << format_vec(p) << " is not in the body (residual " << r << ")";
    throw DomainError(os.str());
  }
}

}  // namespace

ConvexBody ConvexBody::polytope(Mat A, Vec b) {
  const int m = static_cast<int>(A.rows());
  const int d = static_cast<int>(A.cols());
  if (d < 1 || m < 1 || b.size() != m) throw DomainError("polytope needs A (m×d) and b (m) with m, d >= 1");
  if (binomial(m, d) > kMaxCombinations) throw DomainError("polytope has too many constraints for enumeration");

  Eigen::FullPivLU<Mat> full(A);
  if (full.rank() < d) throw DomainError("polytope is unbounded (constraint matrix has a nontrivial kernel)");

  // Extreme rays of the recession cone {A r <= 0}: one-dimensional kernels of
  // (d-1)-row subsystems.
  bool unbounded = false;
  for_each_subset(m, d - 1, [&](const std::vector<int>& rows) {
    if (unbounded) return;
    Vec r;
    if (d == 1) {
      r = Vec::Ones(1);
    } else {
      Eigen::FullPivLU<Mat> lu(rows_of(A, rows));
      if (lu.rank() != d - 1) return;
      r = lu.kernel().col(0);
    }
    r.normalize();
    for (const double sgn : {1.0, -1.0}) {
      const Vec ar = sgn * (A * r);
      bool ok = true;
      for (Eigen::Index i = 0; i < m && ok; ++i) ok = ar[i] <= kDirectionTol * A.row(i).norm();
      if (ok) unbounded = true;
    }
  });
  if (unbounded) throw DomainError("polytope is unbounded (recession cone contains a ray)");

  ConvexBody body(HPolytope{A, b});
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  for_each_subset(m, d, [&](const std::vector<int>& rows) {
    const Mat S = rows_of(A, rows);
    Eigen::FullPivLU<Mat> lu(S);
    if (lu.rank() != d) return;
    Vec bs(d);
    for (int i = 0; i < d; ++i) bs[i] = b[rows[static_cast<std::size_t>(i)]];
    const Vec x = lu.solve(bs);
    if ((A * x - b).maxCoeff() > kActiveTol * scale) return;
    for (const Vec& v : body.vertices_)
      if ((v - x).norm() <= kActiveTol * scale) return;
    body.vertices_.push_back(x);
  });
  if (body.vertices_.empty()) throw DomainError("polytope is empty");
  return body;
}

ConvexBody ConvexBody::ball(Vec center, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw DomainError("ball radius must be positive");
  if (center.size() < 1) throw DomainError("ball center must have dimension >= 1");
  return ConvexBody(Ball{std::move(center), radius});
}

ConvexBody ConvexBody::box(int d, double lo, double hi) {
  Mat A = Mat::Zero(2 * d, d);
  Vec b(2 * d);
  for (int i = 0; i < d; ++i) {
    A(2 * i, i) = 1.0;
    b[2 * i] = hi;
    A(2 * i + 1, i) = -1.0;
    b[2 * i + 1] = -lo;
  }
  return polytope(std::move(A), std::move(b));
}

int ConvexBody::dim() const {
  return is_polytope() ? static_cast<int>(as_polytope().A.cols()) : static_cast<int>(as_ball().center.size());
}

double ConvexBody::residual(const Vec& x) const {
  if (is_polytope()) {
    const auto& P = as_polytope();
    return (P.A * x - P.b).maxCoeff();
  }
  const auto& B = as_ball();
  return (x - B.center).norm() - B.radius;
}

std::vector<Vec> normal_functionals(const ConvexBody& C, const Vec& p, double active_tol) {
  require_member(C, p, active_tol);
  std::vector<Vec> out;
  if (C.is_polytope()) {
    const auto& P = C.as_polytope();
    for (Eigen::Index i = 0; i < P.A.rows(); ++i)
      if (std::abs(P.A.row(i).dot(p) - P.b[i]) <= active_tol) out.push_back(-P.A.row(i).transpose());
    return out;
  }
  const auto& B = C.as_ball();
  const Vec d = p - B.center;
  if (std::abs(d.norm() - B.radius) <= active_tol) out.push_back(-d / d.norm());
  return out;
}

const char* to_string(DirectionClass c) {
  switch (c) {
    case DirectionClass::in_tangent_cone: return "in_tangent_cone";
    case DirectionClass::in_closure_only: return "in_closure_only";
    case DirectionClass::outside: return "outside";
  }
  return "?";
}

Classification classify_direction(const ConvexBody& C, const Vec& p, const Vec& v, double active_tol) {
  if (v.size() != C.dim()) throw DomainError("direction dimension does not match the body");
  Classification out;
  out.functionals = normal_functionals(C, p, active_tol);
  out.min_theta = std::numeric_limits<double>::infinity();
  bool strict = true;      // every θ(v) > tol
  bool closed_ok = true;   // every θ(v) >= -tol
  for (const Vec& theta : out.functionals) {
    const double val = theta.dot(v);
    const double tol = kDirectionTol * theta.norm() * v.norm();
    if (val < out.min_theta) {
      out.min_theta = val;
      if (val < -tol) out.certificate = theta;
    }
    if (val < -tol) closed_ok = false;
    if (val <= tol) strict = false;
  }
  if (!closed_ok) {
    out.kind = DirectionClass::outside;
  } else if (C.is_polytope() || strict || v.norm() == 0.0) {
    // Polyhedral tangent cones are closed: θ(v) >= 0 on the active rows is
    // exactly feasibility of p + tv for small t.
    out.kind = DirectionClass::in_tangent_cone;
  } else {
    out.kind = DirectionClass::in_closure_only;
  }
  if (out.kind != DirectionClass::outside) out.certificate.reset();
  return out;
}

CurveSample::CurveSample(Vec p, std::vector<double> times, std::vector<Vec> points)
    : p_(std::move(p)), times_(std::move(times)), points_(std::move(points)) {
  if (times_.empty() || times_.size() != points_.size()) throw DomainError("curve needs matching times and points");
  for (std::size_t j = 0; j < times_.size(); ++j) {
    if (!(times_[j] > 0.0)) throw DomainError("curve times must be positive");
    if (j > 0 && !(times_[j] < times_[j - 1])) throw DomainError("curve times must decrease");
  }
}

Vec CurveSample::operator()(double t) const {
  if (t <= 0.0) return p_;
  if (t >= times_.front()) return points_.front();
  if (t <= times_.back()) return p_ + (t / times_.back()) * (points_.back() - p_);
  // times_ decreasing: find j with times_[j] >= t > times_[j+1]
  const auto it = std::upper_bound(times_.begin(), times_.end(), t, std::greater<double>());
  const std::size_t j1 = static_cast<std::size_t>(it - times_.begin());
  const std::size_t j0 = j1 - 1;
  const double w = (t - times_[j1]) / (times_[j0] - times_[j1]);
  return points_[j1] + w * (points_[j0] - points_[j1]);
}

CurveSample construct_curve_from_sequence(const ConvexBody& C, const Vec& p,
                                          const std::function<Vec(int)>& directions, double t_start, int levels) {
  require_member(C, p, kActiveTol);
  if (!(t_start > 0.0) || levels < 1) throw DomainError("curve ladder needs t_start > 0 and levels >= 1");
  std::vector<double> times;
  std::vector<Vec> points;
  for (int j = 0; j < levels; ++j) {
    const double t = std::ldexp(t_start, -j);
    Vec q = p + t * directions(j);
    if (!C.contains(q)) {
      std::ostringstream os;
      os << "curve point at t = " << t << " leaves the body (residual " << C.residual(q) << ")";
      throw DomainError(os.str());
    }
    times.push_back(t);
    points.push_back(std::move(q));
  }
  return CurveSample(p, std::move(times), std::move(points));
}

CurveSample construct_curve(const ConvexBody& C, const Vec& p, const Vec& v, const CurveOptions& options) {
  const Classification cls = classify_direction(C, p, v);
  if (cls.kind == DirectionClass::outside) {
    std::ostringstream os;
    os << "direction " << format_vec(v) << " is outside the closed tangent cone; certificate θ = "
       << format_vec(*cls.certificate) << " with θ(v) = " << cls.min_theta;
    throw OutsideConeError(os.str(), *cls.certificate);
  }
  const double vn = v.norm();
  if (vn == 0.0) return construct_curve_from_sequence(C, p, [&](int) { return v; }, 1.0, options.levels);

  if (C.is_polytope()) {
    // Largest step keeping the inactive constraints satisfied.
    const auto& P = C.as_polytope();
    double t_max = 1.0;
    const Vec av = P.A * v;
    const Vec slack = P.b - P.A * p;
    for (Eigen::Index i = 0; i < P.A.rows(); ++i)
      if (slack[i] > kActiveTol && av[i] > 0.0) t_max = std::min(t_max, slack[i] / av[i]);
    const double t1 = options.t_start.value_or(0.5 * t_max);
    return construct_curve_from_sequence(C, p, [&](int) { return v; }, t1, options.levels);
  }

  const auto& B = C.as_ball();
  const Vec d = p - B.center;
  const double r = B.radius;
  if (cls.functionals.empty()) {
    // interior point: largest t with ‖d + tv‖ <= r
    const double bq = d.dot(v), cq = d.squaredNorm() - r * r;
    const double t_max = (-bq + std::sqrt(bq * bq - vn * vn * cq)) / (vn * vn);
    const double t1 = options.t_start.value_or(std::min(1.0, 0.5 * t_max));
    return construct_curve_from_sequence(C, p, [&](int) { return v; }, t1, options.levels);
  }
  const Vec n = d / d.norm();
  if (cls.kind == DirectionClass::in_tangent_cone) {
    const double t_max = -2.0 * r * n.dot(v) / (vn * vn);
    const double t1 = options.t_start.value_or(std::min(1.0, 0.5 * t_max));
    return construct_curve_from_sequence(C, p, [&](int) { return v; }, t1, options.levels);
  }
  // Tangent direction: tilt inward by δ_j so that p + t_j v_j is a chord point.
  // ‖d + t(v - δn)‖² <= r² reduces to t(‖v‖² + δ²) <= 2rδ, which holds for
  // δ = t‖v‖²/r whenever t‖v‖ <= r.
  const double t1 = options.t_start.value_or(std::min(0.5, 0.5 * r / vn));
  const Vec vt = v - n.dot(v) * n;
  return construct_curve_from_sequence(
      C, p,
      [&](int j) {
        const double t = std::ldexp(t1, -j);
        return Vec(vt - (t * vn * vn / r) * n);
      },
      t1, options.levels);
}

std::vector<double> geometric_ladder(double t_start, int j_first, int j_last) {
  std::vector<double> out;
  for (int j = j_first; j <= j_last; ++j) out.push_back(std::ldexp(t_start, -j));
  return out;
}

DerivativeCheck verify_curve_derivative(const CurveSample& curve, const Vec& p, const Vec& v,
                                        const std::vector<double>& t_grid) {
  DerivativeCheck out;
  std::vector<double> lx, ly;
  const double floor = 1e-14 * std::max(1.0, v.norm());
  for (const double t : t_grid) {
    const double e = ((curve(t) - p) / t - v).norm();
    out.errors.push_back(e);
    out.max_error = std::max(out.max_error, e);
    if (e > floor) {
      lx.push_back(std::log(t));
      ly.push_back(std::log(e));
    }
  }
  if (lx.size() >= 2) {
    const double n = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sx += lx[i];
      sy += ly[i];
      sxx += lx[i] * lx[i];
      sxy += lx[i] * ly[i];
    }
    const double den = n * sxx - sx * sx;
    if (den > 0.0) out.observed_rate = (n * sxy - sx * sy) / den;
  }
  return out;
}

}  // namespace wdm::cone

#include "wdm/transport.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace wdm {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

void require_same_grid(const GridFunction& a, const GridFunction& b) {
  if (a.size() != b.size() || a.x_lo() != b.x_lo() || a.x_hi() != b.x_hi())
    throw std::invalid_argument("f_eps and g_eps must share one grid");
}

void require_ladder(const GridFamily& family) {
  if (family.eps.size() != family.f.size()) throw std::invalid_argument("one grid function per epsilon is required");
  if (family.eps.empty()) throw std::invalid_argument("epsilon ladder is empty");
}

// Least-squares line y = a + b x with coefficient of determination.
struct LineFit {
  double a = 0.0;
  double b = 0.0;
  double r2 = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit f;
  f.b = sxy / sxx;
  f.a = my - f.b * mx;
  f.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return f;
}

}  // namespace

std::vector<double> default_epsilon_ladder() { return {0.2, 0.1, 0.05, 0.025, 0.0125}; }

GridSpec transport_grid(const SupportSet& support, const Mollifier& psi, double eps, double eps_min,
                        double cells_per_width) {
  if (!(cells_per_width > 0.0)) throw std::invalid_argument("cells_per_width must be positive");
  const double s = psi.support_half_width();
  const double h = std::min(eps_min * s / 100.0, eps * s / cells_per_width);
  return grid_covering(support, eps * s, h);
}

GridFunction smooth_measure(const RadonMeasureSpec& mu, const ScaledMollifier& psi_eps, const GridSpec& grid,
                            kernels::Exec exec) {
  if (mu.support_is_declared())
    throw DomainError("measure with declared support " + mu.support().to_string() +
                      " has no explicit mass to mollify");
  return convolve_mollifier(psi_eps, mu.as_distribution(), grid, exec);
}

GridFunction smooth_distribution(const StructuredDistribution& eta, const ScaledMollifier& psi_eps,
                                 const SupportSet& supp_mu, const GridSpec& grid, kernels::Exec exec) {
  for (const auto& a : eta.atoms()) {
    if (!supp_mu.contains(a.location)) {
      std::ostringstream os;
      os << "supp eta is not contained in supp mu = " << supp_mu.to_string() << ": atom " << fmt(a.coeff)
         << " d^" << a.order << " delta at " << fmt(a.location) << " lies outside";
      throw DomainError(os.str());
    }
  }
  for (const auto& p : eta.density().pieces()) {
    if (!supp_mu.includes(p.nonzero))
      throw DomainError("supp eta is not contained in supp mu = " + supp_mu.to_string() + ": density piece " +
                        p.label + " on " + p.nonzero.to_string() + " lies outside");
  }
  return convolve_mollifier(psi_eps, eta, grid, exec);
}

VelocitySolution solve_velocity(const GridFunction& f, const GridFunction& g, double tau) {
  require_same_grid(f, g);
  const std::size_t n = f.size();
  const double fmax = f.sup_abs();
  const double gsup = g.sup_abs();
  const double tol = 1e-8 * gsup;

  VelocitySolution sol;
  sol.mask.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) sol.mask[i] = fmax > 0.0 && f[i] > tau * fmax;

  const GridFunction left = cumulative_integral(g);
  const GridFunction right = cumulative_integral_from_right(g);
  if (std::abs(left[n - 1]) > tol)
    throw DomainError("no compactly supported solution: G(x_hi) = " + fmt(left[n - 1]) +
                      " (total action of eta on 1 is nonzero?)");
  for (std::size_t i = 0; i < n; ++i) {
    if (!sol.mask[i] && std::abs(left[i]) > tol)
      throw DomainError("support violation: G(" + fmt(f.x(i)) + ") = " + fmt(left[i]) + " where f_eps vanishes");
  }

  sol.G = GridFunction::zeros(f.x_lo(), f.x_hi(), n);
  sol.v = GridFunction::zeros(f.x_lo(), f.x_hi(), n);
  for (std::size_t b = 0; b < n;) {
    if (!sol.mask[b]) {
      ++b;
      continue;
    }
    std::size_t e = b;
    while (e + 1 < n && sol.mask[e + 1]) ++e;
    const std::size_t mid = b + (e - b) / 2;
    for (std::size_t i = b; i <= e; ++i) {
      sol.G[i] = i <= mid ? left[i] : right[i];
      sol.v[i] = -sol.G[i] / f[i];
    }
    b = e + 1;
  }

  const GridFunction flux = multiply(f, sol.v);
  const GridFunction dflux = differentiate(flux);
  for (std::size_t i = 2; i + 2 < n; ++i) {
    bool inner = true;
    for (std::size_t j = i - 2; j <= i + 2; ++j) inner = inner && sol.mask[j];
    if (inner) sol.residual = std::max(sol.residual, std::abs(g[i] + dflux[i]));
  }
  for (std::size_t i = 0; i < n; ++i)
    if (sol.mask[i]) sol.reconstruction = std::max(sol.reconstruction, std::abs(flux[i] + sol.G[i]));
  return sol;
}

std::vector<VelocityLevel> velocity_representative(const RadonMeasureSpec& mu, const StructuredDistribution& eta,
                                                   const Mollifier& psi, const VelocityOptions& options) {
  if (options.ladder.empty()) throw std::invalid_argument("epsilon ladder is empty");
  for (std::size_t i = 0; i < options.ladder.size(); ++i) {
    const double e = options.ladder[i];
    if (!(e > 0.0 && e < 1.0)) throw std::invalid_argument("epsilon values must lie in (0, 1)");
    if (i > 0 && !(e < options.ladder[i - 1])) throw std::invalid_argument("epsilon ladder must be decreasing");
  }
  const double eps_min = options.ladder.back();
  const SupportSet supp = support_of(mu);
  std::vector<VelocityLevel> out;
  for (double eps : options.ladder) {
    const ScaledMollifier psi_eps(psi, eps);
    const GridSpec grid = transport_grid(supp, psi, eps, eps_min, options.cells_per_width);
    VelocityLevel L;
    L.eps = eps;
    L.f = smooth_measure(mu, psi_eps, grid, options.exec);
    L.g = smooth_distribution(eta, psi_eps, supp, grid, options.exec);
    L.solution = solve_velocity(L.f, L.g, options.tau);
    L.mass = quadrature(L.f);
    L.sup_g = L.g.sup_abs();
    L.sup_v = L.solution.v.sup_abs();
    out.push_back(std::move(L));
  }
  return out;
}

double sup_on(const GridFunction& f, Interval K, int order) {
  if (order < 0) throw std::invalid_argument("derivative order must be >= 0");
  GridFunction d = f;
  for (int j = 0; j < order; ++j) d = differentiate(d);
  double s = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (K.contains(d.x(i))) s = std::max(s, std::abs(d[i]));
  return s;
}

ModeratenessFit moderateness_estimate(const GridFamily& family, Interval K, int order) {
  require_ladder(family);
  const auto [lo, hi] = std::minmax_element(family.eps.begin(), family.eps.end());
  if (family.eps.size() < 5 || std::log10(*hi / *lo) < 1.5 - 1e-12)
    throw std::invalid_argument("moderateness fit needs at least 5 epsilon values spanning 1.5 decades");
  ModeratenessFit fit;
  std::vector<double> x, y;
  for (std::size_t i = 0; i < family.eps.size(); ++i) {
    const double s = sup_on(family.f[i], K, order);
    if (!std::isfinite(s) || !(s > 0.0))
      throw DomainError("sup at eps = " + fmt(family.eps[i]) + " is " + fmt(s) + "; log-log fit undefined");
    fit.sups.push_back(s);
    x.push_back(-std::log(family.eps[i]));
    y.push_back(std::log(s));
  }
  const LineFit l = fit_line(x, y);
  fit.N = l.b;
  fit.c = std::exp(l.a);
  fit.r2 = l.r2;
  return fit;
}

std::vector<NegligibilityRow> negligibility_test(const GridFamily& family, Interval K, int order, int q_max) {
  require_ladder(family);
  if (family.eps.size() < 3) throw std::invalid_argument("negligibility test needs at least 3 epsilon values");
  std::vector<std::pair<double, double>> levels;  // (eps, sup), by decreasing eps
  for (std::size_t i = 0; i < family.eps.size(); ++i)
    levels.emplace_back(family.eps[i], sup_on(family.f[i], K, order));
  std::sort(levels.begin(), levels.end(), [](const auto& a, const auto& b) { return a.first > b.first; });

  std::vector<NegligibilityRow> rows;
  for (int q = 0; q <= q_max; ++q) {
    NegligibilityRow r;
    r.q = q;
    for (const auto& [e, s] : levels) r.scaled.push_back(s * std::pow(e, -q));
    r.bounded = true;
    for (std::size_t j = r.scaled.size() - 3; j + 1 < r.scaled.size(); ++j)
      if (r.scaled[j + 1] > r.scaled[j] * (1.0 + 1e-3)) r.bounded = false;
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<AssociationRow> verify_association(const GridFamily& family, const StructuredDistribution& target,
                                               const std::vector<SmoothFunction>& battery) {
  require_ladder(family);
  std::vector<AssociationRow> rows;
  for (const auto& phi : battery) {
    AssociationRow r;
    r.phi = phi.name();
    const double exact = pair(target, phi);
    for (const auto& f : family.f) {
      GridFunction prod = f;
      for (std::size_t i = 0; i < prod.size(); ++i) prod[i] *= phi(prod.x(i));
      r.residuals.push_back(std::abs(quadrature(prod) - exact));
    }
    const auto& res = r.residuals;
    const bool all_tiny = std::all_of(res.begin(), res.end(), [](double v) { return v <= 1e-12; });
    bool decreasing = res.size() >= 2;
    for (std::size_t j = res.size() >= 3 ? res.size() - 3 : 0; j + 1 < res.size(); ++j)
      decreasing = decreasing && res[j + 1] < res[j];
    r.converging = all_tiny || (decreasing && res.back() <= res.front() / 4.0);

    std::vector<double> x, y;
    for (std::size_t i = 0; i < res.size(); ++i) {
      if (res[i] > 1e-14) {
        x.push_back(std::log(family.eps[i]));
        y.push_back(std::log(res[i]));
      }
    }
    if (x.size() >= 2) r.observed_order = fit_line(x, y).b;
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace wdm

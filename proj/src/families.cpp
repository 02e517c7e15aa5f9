#include "wdm/families.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace wdm {

namespace {

constexpr int kPerturbationPanels = 4096;
constexpr int kBasePanels = 8192;
// battery plateau factors are ψ((x - c)/kWidth)
constexpr double kWidth = 3.0;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

MeasureFamily::MeasureFamily(std::string name, Sampler sampler, Integrator integrate, double t_max, bool one_sided,
                             StructuredDistribution target, std::vector<double> error_exponents)
    : name_(std::move(name)),
      sampler_(std::move(sampler)),
      integrate_(std::move(integrate)),
      t_max_(t_max),
      one_sided_(one_sided),
      target_(std::move(target)),
      exponents_(std::move(error_exponents)) {
  if (!(t_max_ > 0.0)) throw DomainError("family validity interval must be nonempty");
}

bool MeasureFamily::valid(double t) const {
  if (one_sided_ && t < 0.0) return false;
  return std::abs(t) < t_max_;
}

void MeasureFamily::require_valid(double t) const {
  if (!valid(t))
    throw DomainError("t = " + fmt(t) + " is outside the validity interval of " + name_ + " (t_max = " + fmt(t_max_) +
                      (one_sided_ ? ", one-sided)" : ")"));
}

RadonMeasureSpec MeasureFamily::at(double t) const {
  require_valid(t);
  return sampler_(t);
}

double MeasureFamily::integrate(const SmoothFunction& phi, double t) const {
  require_valid(t);
  return integrate_(phi, t);
}

// ------------------------------------------------------------ explicit family

double explicit_density(double x, double t, int k, double q, const Mollifier& psi, Interval U) {
  const double base = U.contains(x) ? 1.0 : 0.0;
  if (t == 0.0) return base;
  const double at = std::abs(t);
  const double lambda = std::pow(at, (q - 1.0) / (k + 1));
  const double sign = (k % 2 ? -1.0 : 1.0) * (t > 0.0 ? 1.0 : -1.0);
  return base + sign * std::pow(at, q) * psi.derivative(lambda * x, k);
}

double max_valid_t(int k, double q, const Mollifier& psi, Interval U) {
  const double amplitude = std::pow(psi.sup_derivative(k), -1.0 / q);
  const double containment = std::pow(U.length() / (2.0 * psi.support_half_width()), (k + 1) / (1.0 - q));
  return std::min(amplitude, containment);
}

MeasureFamily explicit_family(int k, double q, const Mollifier& psi, Interval U) {
  if (k < 1) throw std::invalid_argument("explicit_family needs k >= 1");
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("explicit_family needs 0 < q < 1");
  if (!(U.hi > 0.0) || std::abs(U.lo + U.hi) > 1e-15) throw std::invalid_argument("U must be symmetric about 0");
  if (k > psi.max_order()) throw UnsupportedOrder("mollifier does not provide order " + std::to_string(k));
  const double t_max = max_valid_t(k, q, psi, U);

  auto sampler = [k, q, psi, U](double t) {
    const std::string label = "rho(x, " + fmt(t) + ")";
    return RadonMeasureSpec(
        Density::closed_form(U, [k, q, psi, U, t](double x) { return explicit_density(x, t, k, q, psi, U); }, label),
        {});
  };

  // The base part is the same for every t, so differences in t see only the
  // perturbation. The perturbation is integrated in the stretched variable
  // y = λx over supp ψ^(k), which keeps resolution as its support shrinks.
  auto integrate = [k, q, psi, U](const SmoothFunction& phi, double t) {
    const double base = quadrature(phi.as_std_function(), U.lo, U.hi, kBasePanels);
    if (t == 0.0) return base;
    const double at = std::abs(t);
    const double lambda = std::pow(at, (q - 1.0) / (k + 1));
    const double sign = (k % 2 ? -1.0 : 1.0) * (t > 0.0 ? 1.0 : -1.0);
    const double s = psi.support_half_width();
    const double inner =
        quadrature([&](double y) { return phi(y / lambda) * psi.derivative(y, k); }, -s, s, kPerturbationPanels);
    return base + sign * std::pow(at, q) * inner / lambda;
  };

  // (F(t) - F(0))/t = ∫ φ^(k)(y |t|^γ) ψ(y) dy with γ = (1-q)/(k+1); ψ is
  // even, so the expansion runs over even powers of |t|^γ.
  const double gamma = (1.0 - q) / (k + 1);
  std::vector<double> exponents;
  for (int j = 1; j <= 24; ++j) exponents.push_back(2.0 * j * gamma);

  const double sign = k % 2 ? -1.0 : 1.0;
  std::ostringstream name;
  name << "explicit(k=" << k << ", q=" << fmt(q) << ")";
  return MeasureFamily(name.str(), sampler, integrate, t_max, false,
                       StructuredDistribution::derivative_of_delta(0.0, k, sign), std::move(exponents));
}

// ------------------------------------------------------------ other families

MeasureFamily delta_family() {
  return MeasureFamily(
      "delta", [](double t) { return RadonMeasureSpec::dirac(t); },
      [](const SmoothFunction& phi, double t) { return phi(t); }, std::numeric_limits<double>::infinity(), false,
      StructuredDistribution::derivative_of_delta(0.0, 1, -1.0));
}

MeasureFamily scaling_family(const RadonMeasureSpec& mu, double c) {
  const double t_max = c == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / std::abs(c);
  return MeasureFamily(
      "scaling(c=" + fmt(c) + ")", [mu, c](double t) { return mu.scaled(1.0 + c * t); },
      [mu, c](const SmoothFunction& phi, double t) { return (1.0 + c * t) * mu.integrate(phi); }, t_max, false,
      c * mu.as_distribution());
}

MeasureFamily linear_family(const RadonMeasureSpec& mu, const RadonMeasureSpec& nu, double t_max) {
  return MeasureFamily(
      "linear",
      [mu, nu](double t) {
        auto density = mu.density();
        density += nu.density().scaled(t);
        auto masses = mu.point_masses();
        for (const auto& p : nu.point_masses()) masses.push_back({p.location, t * p.mass});
        return RadonMeasureSpec(std::move(density), std::move(masses));
      },
      [mu, nu](const SmoothFunction& phi, double t) { return mu.integrate(phi) + t * nu.integrate(phi); }, t_max, true,
      nu.as_distribution());
}

MeasureFamily normalize_to_probability(const MeasureFamily& family) {
  const auto one = SmoothFunction::generic([](auto x) { return 0.0 * x + 1.0; }, "1");
  auto mass = [family, one](double t) {
    const double m = family.integrate(one, t);
    if (!(m > 0.0)) throw DomainError("total mass of " + family.name() + " vanishes at t = " + fmt(t));
    return m;
  };
  const double m0 = mass(0.0);
  const auto& eta = family.target();
  const double eta_one = total_action_on_one(eta);
  StructuredDistribution target = eta.scaled(1.0 / m0);
  if (eta_one != 0.0) target = target - family.at(0.0).as_distribution().scaled(eta_one / (m0 * m0));

  return MeasureFamily(
      "normalized " + family.name(), [family, mass](double t) { return family.at(t).scaled(1.0 / mass(t)); },
      [family, mass](const SmoothFunction& phi, double t) { return family.integrate(phi, t) / mass(t); },
      family.t_max(), family.one_sided(), std::move(target), family.error_exponents());
}

// ---------------------------------------------------------------- verification

std::vector<WeakDerivativeRow> verify_weak_derivative(const MeasureFamily& family,
                                                      const std::vector<SmoothFunction>& battery,
                                                      const WeakDerivativeOptions& options) {
  if (battery.empty()) throw std::invalid_argument("test function battery is empty");
  if (options.side == Side::minus && family.one_sided())
    throw DomainError(family.name() + " is only defined for t >= 0");
  RichardsonOptions ro;
  ro.t_start = options.t_start.value_or(std::min(family.t_max() / 4.0, 0.1));
  ro.levels = options.levels;
  ro.exponents = family.error_exponents();

  std::vector<WeakDerivativeRow> rows(battery.size());
  std::vector<double> done(battery.size());
  kernels::evaluate(
      [&](std::size_t i) {
        const auto& phi = battery[i];
        const auto r = richardson_one_sided([&](double t) { return family.integrate(phi, t); }, 0.0, options.side, ro);
        WeakDerivativeRow row;
        row.phi = phi.name();
        row.estimate = r.estimate;
        row.error_bound = r.error_bound;
        row.target = pair(family.target(), phi);
        row.abs_err = std::abs(row.estimate - row.target);
        row.rel_err = row.target != 0.0 ? row.abs_err / std::abs(row.target) : row.abs_err;
        rows[i] = std::move(row);
        return 1.0;
      },
      done, options.exec);
  return rows;
}

std::vector<SmoothFunction> standard_battery(const Mollifier& psi) {
  using std::cos, std::exp, std::sin;
  std::vector<SmoothFunction> out;
  auto add = [&](auto g, const std::string& gname, double c) {
    const double reach = kWidth * psi.support_half_width();
    out.push_back(SmoothFunction::generic([g, psi, c](auto x) { return g(x) * psi((x - c) / kWidth); },
                                          gname + " * bump(x - " + fmt(c) + ")", Interval{c - reach, c + reach}));
  };
  add([](auto x) { return exp(x); }, "exp(x)", 0.0);
  add([](auto x) { return exp(-2.0 * x); }, "exp(-2x)", 0.1);
  add([](auto x) { return exp(0.5 * x); }, "exp(x/2)", -0.1);
  add([](auto x) { return sin(x) + cos(x); }, "sin(x)+cos(x)", 0.2);
  add([](auto x) { return sin(2.0 * x) + cos(2.0 * x); }, "sin(2x)+cos(2x)", -0.2);
  add([](auto x) { return 1.0 + x * (1.0 + x * (0.5 + x * (1.0 / 6.0 + x / 24.0))); }, "exp_taylor4(x)", 0.3);
  add([](auto x) { return 1.0 + x * (3.0 + x * (-2.0 + 0.5 * x)); }, "1+3x-2x^2+x^3/2", -0.3);
  add([](auto x) { return exp(x) * (1.0 + x); }, "exp(x)(1+x)", 0.05);
  add([](auto x) { return 1.0 / (3.0 - x); }, "1/(3-x)", -0.05);
  add([](auto x) { return 1.5 * exp(x) - 0.5 * exp(-x); }, "1.5exp(x)-0.5exp(-x)", 0.15);
  return out;
}

}  // namespace wdm

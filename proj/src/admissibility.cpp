#include "wdm/admissibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace wdm {

namespace {

// exp(1 - 1/(1-u²)) underflows well before 1 - u² reaches this
constexpr double kBumpCutoff = 1.0 / 700.0;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

std::string describe_atom(const Atom& a) {
  std::ostringstream os;
  os.precision(17);
  os << a.coeff << " d^" << a.order << " delta_" << a.location;
  return os.str();
}

// Open components of R \ supp μ, clipped to `window`.
std::vector<Interval> complement_components(const SupportSet& supp, Interval window) {
  std::vector<Interval> out;
  double lo = window.lo;
  for (const auto& iv : supp.intervals()) {
    if (iv.lo > lo) out.push_back({lo, std::min(iv.lo, window.hi)});
    lo = std::max(lo, iv.hi);
  }
  if (window.hi > lo) out.push_back({lo, window.hi});
  std::erase_if(out, [](const Interval& c) { return !(c.hi > c.lo); });
  return out;
}

Interval search_window(const SupportSet& supp_mu, const StructuredDistribution& eta) {
  SupportSet all = supp_mu.united(support_of(eta));
  if (all.empty()) all = SupportSet::point(0.0);
  const Interval h = all.hull();
  return {h.lo - 1.0, h.hi + 1.0};
}

// Distance from an isolated support point p to the rest of supp μ.
double isolation_radius(const SupportSet& supp, double p) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& iv : supp.intervals()) {
    if (iv.degenerate() && std::abs(iv.lo - p) <= kLocationTol) continue;
    d = std::min(d, std::max(iv.lo - p, p - iv.hi));
  }
  return d;
}

std::vector<double> width_ladder(double w_max, double w_min) {
  std::vector<double> out;
  for (double w = w_max; w >= w_min; w *= 0.5) out.push_back(w);
  return out;
}

bool violates(double value, double tol, Mode mode) {
  return mode == Mode::one_sided ? value < -tol : std::abs(value) > tol;
}

void append_density_rules(const SupportSet& supp, const Density& density, double tol, std::vector<RuleFiring>& trace) {
  if (density.empty()) return;
  // Breakpoints of the density and of supp μ cut the line into pieces on which
  // the total density is smooth; sample each piece lying off supp μ.
  std::vector<double> cuts;
  for (const auto& p : density.pieces()) {
    cuts.push_back(p.support.lo);
    cuts.push_back(p.support.hi);
  }
  for (const auto& iv : supp.intervals()) {
    cuts.push_back(iv.lo);
    cuts.push_back(iv.hi);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  constexpr int kSamples = 2001;
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    const double lo = cuts[i - 1], hi = cuts[i];
    const double mid = 0.5 * (lo + hi);
    if (supp.contains(mid, 0.0)) continue;
    double worst = std::numeric_limits<double>::infinity();
    double at = mid;
    for (int j = 0; j < kSamples; ++j) {
      const double x = lo + (hi - lo) * (j + 0.5) / kSamples;
      const double v = density(x);
      if (v < worst) {
        worst = v;
        at = x;
      }
    }
    if (worst == 0.0) continue;
    RuleFiring r{"R1", "density on (" + fmt(lo) + ", " + fmt(hi) + ")", worst >= -tol, ""};
    r.note = r.satisfied ? "nonnegative off supp mu" : "density " + fmt(worst) + " < 0 at x = " + fmt(at);
    trace.push_back(std::move(r));
  }
}

}  // namespace

const char* to_string(Mode m) { return m == Mode::one_sided ? "one_sided" : "two_sided"; }

double bump(double u) {
  const double q = 1.0 - u * u;
  if (q <= kBumpCutoff) return 0.0;
  return std::exp(1.0 - 1.0 / q);
}

Taylor bump(const Taylor& u) {
  const Taylor q = 1.0 - u * u;
  if (q.value() <= kBumpCutoff) return Taylor::constant(0.0, u.order());
  return exp(1.0 - 1.0 / q);
}

SmoothFunction TestFunctionSpec::function() const {
  const double c0 = center, w = width;
  const Interval supp{c0 - w, c0 + w};
  if (kind == Kind::free_bump)
    return SmoothFunction::generic([c0, w](auto x) { return bump((x - c0) / w); }, describe(), supp);
  const int m2 = 2 * pin_order;
  const double c = tilt;
  return SmoothFunction::generic(
      [c0, w, m2, c](auto x) {
        using std::pow;
        const auto y = x - c0;
        return pow(y, m2) * (1.0 + c * y) * bump(y / w);
      },
      describe(), supp);
}

std::string TestFunctionSpec::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (kind == Kind::free_bump) {
    os << "free_bump(q=" << center << ", w=" << width << ")";
  } else {
    os << "pinned_bump(p=" << center << ", w=" << width << ", m=" << pin_order << ", c=" << tilt << ")";
  }
  return os.str();
}

bool check_probability_constraint(const StructuredDistribution& eta) {
  return std::abs(total_action_on_one(eta)) <= 1e-10;
}

namespace {

Verdict rules_one_sided(const RadonMeasureSpec& mu, const StructuredDistribution& eta) {
  Verdict v;
  v.mode = Mode::one_sided;
  const SupportSet& supp = mu.support();
  const double tol = kAdmissibilityTol * eta.scale();

  for (const auto& a : eta.atoms()) {
    RuleFiring r;
    r.subject = describe_atom(a);
    switch (supp.classify(a.location)) {
      case SupportSet::PointKind::outside:
        if (a.order == 0) {
          r.rule = "R1";
          r.satisfied = a.coeff >= -tol;
          r.note = r.satisfied ? "point mass off supp mu is nonnegative" : "negative point mass off supp mu";
        } else {
          r.rule = "R2";
          r.satisfied = false;
          r.note = "derivative atom off supp mu";
        }
        break;
      case SupportSet::PointKind::interior:
      case SupportSet::PointKind::boundary:
        r.rule = "R3";
        r.note = "every admissible test function is flat here";
        break;
      case SupportSet::PointKind::isolated:
        r.rule = "R4";
        if (a.order <= 1) {
          r.note = a.order == 0 ? "f(p) = 0" : "f'(p) = 0";
        } else if (a.order == 2) {
          r.satisfied = a.coeff >= -tol;
          if (std::abs(a.coeff) <= tol) {
            r.note = "b = 0 boundary case of b >= 0";
          } else {
            r.note = r.satisfied ? "b > 0" : "b < 0 at an isolated point";
          }
        } else {
          r.satisfied = false;
          r.note = "order above 2 at an isolated point";
        }
        break;
    }
    v.trace.push_back(std::move(r));
  }
  append_density_rules(supp, eta.density(), tol, v.trace);
  v.admissible = std::all_of(v.trace.begin(), v.trace.end(), [](const RuleFiring& r) { return r.satisfied; });
  return v;
}

void finish(Verdict& v, const RadonMeasureSpec& mu, const StructuredDistribution& eta, const CheckOptions& options) {
  if (options.check_probability) {
    const bool ok = check_probability_constraint(eta);
    v.probability_constraint_ok = ok;
    v.trace.push_back({"probability", "<eta, 1> = " + fmt(total_action_on_one(eta)), ok,
                       ok ? "total action on 1 vanishes" : "total action on 1 is nonzero"});
  }
  if (!v.admissible && options.seek_counterexample) {
    FalsifyOptions fo = options.falsify;
    fo.mode = v.mode;
    v.counterexample = falsify(mu, eta, fo);
  }
}

}  // namespace

Verdict check_one_sided(const RadonMeasureSpec& mu, const StructuredDistribution& eta, const CheckOptions& options) {
  Verdict v = rules_one_sided(mu, eta);
  finish(v, mu, eta, options);
  return v;
}

Verdict check_two_sided(const RadonMeasureSpec& mu, const StructuredDistribution& eta, const CheckOptions& options) {
  Verdict plus = rules_one_sided(mu, eta);
  Verdict minus = rules_one_sided(mu, -eta);
  Verdict v;
  v.mode = Mode::two_sided;
  v.admissible = plus.admissible && minus.admissible;
  for (auto& r : plus.trace) {
    r.subject = "+eta: " + r.subject;
    v.trace.push_back(std::move(r));
  }
  for (auto& r : minus.trace) {
    r.subject = "-eta: " + r.subject;
    v.trace.push_back(std::move(r));
  }
  finish(v, mu, eta, options);
  return v;
}

Verdict check(const RadonMeasureSpec& mu, const StructuredDistribution& eta, Mode mode, const CheckOptions& options) {
  return mode == Mode::one_sided ? check_one_sided(mu, eta, options) : check_two_sided(mu, eta, options);
}

std::vector<TestFunctionSpec> falsification_candidates(const RadonMeasureSpec& mu, const StructuredDistribution& eta,
                                                       const FalsifyOptions& options) {
  using Kind = TestFunctionSpec::Kind;
  std::vector<TestFunctionSpec> out;
  const std::size_t budget = std::max<std::size_t>(options.budget, 1);
  auto push = [&](TestFunctionSpec s) {
    if (out.size() < budget) out.push_back(s);
  };
  const SupportSet& supp = mu.support();
  const Interval window = search_window(supp, eta);
  const auto components = complement_components(supp, window);

  // a free bump on [q - w, q + w] must stay inside one open complement component
  auto fits = [&](double q, double w) {
    return std::any_of(components.begin(), components.end(),
                       [&](const Interval& c) { return q - w > c.lo && q + w < c.hi; });
  };

  // Pinned bumps at isolated support points.
  std::vector<std::pair<double, double>> isolated;  // (p, w_max)
  for (const auto& iv : supp.intervals())
    if (iv.degenerate()) isolated.push_back({iv.lo, std::min(1.0, 0.99 * isolation_radius(supp, iv.lo))});
  for (const auto& [p, w_max] : isolated)
    for (int m = 1; m <= 3; ++m)
      for (double w : width_ladder(w_max, options.min_width))
        for (double t : {0.0, 0.5, -0.5, 0.9, -0.9}) push({Kind::pinned_bump, p, w, m, t / w});

  // Free bumps around atoms off supp μ, centered and shifted.
  for (const auto& a : eta.atoms()) {
    const double d = supp.empty() ? 1.0 : supp.distance(a.location);
    if (!(d > 0.0)) continue;
    for (double w : width_ladder(std::min(1.0, 0.99 * d), options.min_width))
      for (double shift : {0.0, 0.25, -0.25, 0.5, -0.5}) {
        const double q = a.location + shift * w;
        if (fits(q, w)) push({Kind::free_bump, q, w, 0, 0.0});
      }
  }

  // Free bumps inside each stretch where a density piece meets the complement.
  for (const auto& piece : eta.density().pieces())
    for (const auto& c : components) {
      const double lo = std::max(c.lo, piece.support.lo), hi = std::min(c.hi, piece.support.hi);
      if (!(hi > lo)) continue;
      const double mid = 0.5 * (lo + hi);
      for (double w : width_ladder(0.49 * (hi - lo), options.min_width))
        if (fits(mid, w)) push({Kind::free_bump, mid, w, 0, 0.0});
    }

  // Grid over complement components.
  constexpr int kCentersPerLevel = 32;
  for (const auto& c : components) {
    const double len = c.hi - c.lo;
    for (double w : width_ladder(0.49 * len, options.min_width)) {
      const double span = len - 2.0 * w;
      const int n = std::min(kCentersPerLevel, std::max(1, static_cast<int>(span / w)));
      for (int i = 0; i < n; ++i) {
        const double q = c.lo + w + span * (i + 0.5) / n;
        if (fits(q, w)) push({Kind::free_bump, q, w, 0, 0.0});
      }
    }
  }

  // Seeded random sweep.
  const std::size_t sites = isolated.size() + components.size();
  if (sites == 0) return out;
  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<std::size_t> site(0, sites - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t misses = 0;
  while (out.size() < budget && misses < 100 * budget) {
    const std::size_t s = site(rng);
    if (s < isolated.size()) {
      const auto [p, w_max] = isolated[s];
      if (!(w_max > options.min_width)) {
        ++misses;
        continue;
      }
      const double w = w_max * std::pow(options.min_width / w_max, unit(rng));
      const int m = 1 + static_cast<int>(unit(rng) * 3.0) % 3;
      const double c = (2.0 * unit(rng) - 1.0) * 0.9 / w;
      push({Kind::pinned_bump, p, w, m, c});
    } else {
      const auto& c = components[s - isolated.size()];
      const double w_max = 0.49 * (c.hi - c.lo);
      if (!(w_max > options.min_width)) {
        ++misses;
        continue;
      }
      const double w = w_max * std::pow(options.min_width / w_max, unit(rng));
      const double q = c.lo + w + (c.hi - c.lo - 2.0 * w) * unit(rng);
      if (fits(q, w)) {
        push({Kind::free_bump, q, w, 0, 0.0});
      } else {
        ++misses;
      }
    }
  }
  return out;
}

std::optional<Counterexample> falsify(const RadonMeasureSpec& mu, const StructuredDistribution& eta,
                                      const FalsifyOptions& options) {
  const auto candidates = falsification_candidates(mu, eta, options);
  const double tol = kAdmissibilityTol * eta.scale();
  constexpr std::size_t kBlock = 1024;
  std::vector<double> values;
  for (std::size_t start = 0; start < candidates.size(); start += kBlock) {
    const std::size_t n = std::min(kBlock, candidates.size() - start);
    values.assign(n, 0.0);
    kernels::evaluate(
        [&](std::size_t i) { return pair(eta, candidates[start + i].function(), options.panels); }, values,
        options.exec);
    for (std::size_t i = 0; i < n; ++i)
      if (violates(values[i], tol, options.mode)) return Counterexample{candidates[start + i], values[i], options.panels};
  }
  return std::nullopt;
}

}  // namespace wdm

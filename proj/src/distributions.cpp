#include "wdm/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <regex>
#include <sstream>

namespace wdm {

// ---------------------------------------------------------------- SupportSet

SupportSet::SupportSet(std::vector<Interval> intervals) {
  for (const auto& iv : intervals)
    if (!(iv.hi >= iv.lo)) throw std::invalid_argument("support interval with hi < lo");
  std::sort(intervals.begin(), intervals.end(), [](const Interval& a, const Interval& b) {
    return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
  });
  for (const auto& iv : intervals) {
    if (!intervals_.empty() && iv.lo <= intervals_.back().hi) {
      intervals_.back().hi = std::max(intervals_.back().hi, iv.hi);
    } else {
      intervals_.push_back(iv);
    }
  }
}

SupportSet SupportSet::parse(const std::string& text) {
  static const std::regex item(R"(\[\s*([^,\]\s]+)\s*,\s*([^\]\s]+)\s*\])");
  std::vector<Interval> out;
  std::smatch m;
  std::size_t consumed = 0;
  auto begin = text.cbegin();
  while (std::regex_search(begin, text.cend(), m, item)) {
    const std::string between(begin, begin + m.position(0));
    if (between.find_first_not_of(" ;\t") != std::string::npos)
      throw std::invalid_argument("malformed support list: '" + text + "'");
    std::size_t p1 = 0, p2 = 0;
    const double a = std::stod(m[1].str(), &p1);
    const double b = std::stod(m[2].str(), &p2);
    if (p1 != m[1].str().size() || p2 != m[2].str().size())
      throw std::invalid_argument("malformed support bound in '" + text + "'");
    out.push_back({a, b});
    begin += m.position(0) + m.length(0);
    consumed = static_cast<std::size_t>(begin - text.cbegin());
  }
  if (text.substr(consumed).find_first_not_of(" ;\t\r") != std::string::npos || out.empty())
    throw std::invalid_argument("malformed support list: '" + text + "'");
  return SupportSet(std::move(out));
}

Interval SupportSet::hull() const {
  if (intervals_.empty()) throw std::logic_error("hull of an empty support set");
  return {intervals_.front().lo, intervals_.back().hi};
}

bool SupportSet::contains(double x, double tol) const {
  return std::any_of(intervals_.begin(), intervals_.end(), [&](const Interval& iv) { return iv.contains(x, tol); });
}

SupportSet::PointKind SupportSet::classify(double x, double tol) const {
  for (const auto& iv : intervals_) {
    if (!iv.contains(x, tol)) continue;
    if (iv.hi - iv.lo <= tol) return PointKind::isolated;
    if (std::abs(x - iv.lo) <= tol || std::abs(x - iv.hi) <= tol) return PointKind::boundary;
    return PointKind::interior;
  }
  return PointKind::outside;
}

bool SupportSet::includes(const SupportSet& other, double tol) const {
  for (const auto& o : other.intervals_) {
    const bool inside = std::any_of(intervals_.begin(), intervals_.end(), [&](const Interval& iv) {
      return o.lo >= iv.lo - tol && o.hi <= iv.hi + tol;
    });
    if (!inside) return false;
  }
  return true;
}

SupportSet SupportSet::united(const SupportSet& other) const {
  auto all = intervals_;
  all.insert(all.end(), other.intervals_.begin(), other.intervals_.end());
  return SupportSet(std::move(all));
}

SupportSet SupportSet::dilated(double r) const {
  auto all = intervals_;
  for (auto& iv : all) {
    iv.lo -= r;
    iv.hi += r;
  }
  return SupportSet(std::move(all));
}

std::vector<Interval> SupportSet::gaps() const {
  std::vector<Interval> g;
  for (std::size_t i = 1; i < intervals_.size(); ++i) g.push_back({intervals_[i - 1].hi, intervals_[i].lo});
  return g;
}

double SupportSet::distance(double x) const {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& iv : intervals_) {
    if (iv.contains(x)) return 0.0;
    d = std::min({d, std::abs(x - iv.lo), std::abs(x - iv.hi)});
  }
  return d;
}

std::string SupportSet::to_string() const {
  std::ostringstream os;
  os << std::setprecision(17);
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    if (i) os << ';';
    os << '[' << intervals_[i].lo << ',' << intervals_[i].hi << ']';
  }
  return os.str();
}

// ------------------------------------------------------------------- Density

Density Density::uniform(double a, double b, double weight) {
  if (!(b > a)) throw std::invalid_argument("uniform density needs a < b");
  const double height = weight / (b - a);
  Density d;
  std::ostringstream label;
  label << "uniform(" << a << ',' << b << ',' << weight << ')';
  d.pieces_.push_back({{a, b}, [height](double) { return height; }, label.str(),
                       weight != 0.0 ? SupportSet::interval(a, b) : SupportSet{}});
  return d;
}

Density Density::grid(GridFunction samples, std::string label) {
  std::vector<Interval> nz;
  const std::size_t n = samples.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (samples[i] == 0.0) continue;
    // linear interpolation is nonzero up to the neighbouring nodes
    const double lo = samples.x(i == 0 ? 0 : i - 1);
    const double hi = samples.x(i + 1 < n ? i + 1 : n - 1);
    nz.push_back({lo, hi});
  }
  Density d;
  const Interval supp{samples.x_lo(), samples.x_hi()};
  d.pieces_.push_back({supp, [g = std::move(samples)](double x) { return g.interpolate(x); }, std::move(label),
                       SupportSet(std::move(nz))});
  return d;
}

Density Density::closed_form(Interval support, std::function<double(double)> fn, std::string label) {
  if (!(support.hi > support.lo)) throw std::invalid_argument("closed-form density needs a nondegenerate support");
  Density d;
  d.pieces_.push_back({support, std::move(fn), std::move(label), SupportSet({support})});
  return d;
}

double Density::operator()(double x) const {
  double acc = 0.0;
  for (const auto& p : pieces_)
    if (p.support.contains(x)) acc += p.fn(x);
  return acc;
}

Density Density::scaled(double s) const {
  Density d;
  for (const auto& p : pieces_) {
    std::ostringstream label;
    label << s << '*' << p.label;
    d.pieces_.push_back({p.support, [fn = p.fn, s](double x) { return s * fn(x); }, label.str(),
                         s != 0.0 ? p.nonzero : SupportSet{}});
  }
  return d;
}

Density& Density::operator+=(const Density& o) {
  pieces_.insert(pieces_.end(), o.pieces_.begin(), o.pieces_.end());
  return *this;
}

double Density::integral(int panels) const {
  double acc = 0.0;
  for (const auto& p : pieces_) acc += quadrature(p.fn, p.support.lo, p.support.hi, panels);
  return acc;
}

double Density::integral_abs(int panels) const {
  double acc = 0.0;
  for (const auto& p : pieces_)
    acc += quadrature([&](double x) { return std::abs(p.fn(x)); }, p.support.lo, p.support.hi, panels);
  return acc;
}

double Density::integrate_against(const SmoothFunction& f, int panels) const {
  double acc = 0.0;
  for (const auto& p : pieces_) {
    double lo = p.support.lo, hi = p.support.hi;
    if (f.support()) {
      lo = std::max(lo, f.support()->lo);
      hi = std::min(hi, f.support()->hi);
    }
    if (!(hi > lo)) continue;
    acc += quadrature([&](double x) { return p.fn(x) * f(x); }, lo, hi, panels);
  }
  return acc;
}

SupportSet Density::support() const {
  SupportSet s;
  for (const auto& p : pieces_) s = s.united(p.nonzero);
  return s;
}

// ---------------------------------------------------- StructuredDistribution

StructuredDistribution::StructuredDistribution(std::vector<Atom> atoms, Density density)
    : density_(std::move(density)) {
  for (const auto& a : atoms) {
    if (a.order < 0) throw std::invalid_argument("atom order must be >= 0");
    if (!std::isfinite(a.location) || !std::isfinite(a.coeff)) throw std::invalid_argument("non-finite atom");
  }
  std::sort(atoms.begin(), atoms.end(), [](const Atom& x, const Atom& y) {
    return x.location < y.location || (x.location == y.location && x.order < y.order);
  });
  for (const auto& a : atoms) {
    auto same = std::find_if(atoms_.begin(), atoms_.end(), [&](const Atom& b) {
      return b.order == a.order && std::abs(b.location - a.location) <= kLocationTol;
    });
    if (same != atoms_.end()) {
      same->coeff += a.coeff;
    } else {
      atoms_.push_back(a);
    }
  }
  std::erase_if(atoms_, [](const Atom& a) { return a.coeff == 0.0; });
  std::sort(atoms_.begin(), atoms_.end(), [](const Atom& x, const Atom& y) {
    return x.location < y.location || (x.location == y.location && x.order < y.order);
  });
}

int StructuredDistribution::order() const {
  int n = 0;
  for (const auto& a : atoms_) n = std::max(n, a.order);
  return n;
}

double StructuredDistribution::scale() const {
  double s = density_.integral_abs();
  for (const auto& a : atoms_) s += std::abs(a.coeff);
  return s;
}

StructuredDistribution StructuredDistribution::scaled(double s) const {
  auto atoms = atoms_;
  for (auto& a : atoms) a.coeff *= s;
  return StructuredDistribution(std::move(atoms), s == 0.0 ? Density{} : density_.scaled(s));
}

StructuredDistribution operator+(const StructuredDistribution& a, const StructuredDistribution& b) {
  auto atoms = a.atoms_;
  atoms.insert(atoms.end(), b.atoms_.begin(), b.atoms_.end());
  Density d = a.density_;
  d += b.density_;
  return StructuredDistribution(std::move(atoms), std::move(d));
}

std::string StructuredDistribution::describe() const {
  std::ostringstream os;
  os << std::setprecision(10);
  bool first = true;
  for (const auto& a : atoms_) {
    if (!first) os << " + ";
    first = false;
    os << a.coeff << '*';
    if (a.order > 0) os << "d^" << a.order;
    os << "delta(" << a.location << ')';
  }
  for (const auto& p : density_.pieces()) {
    if (!first) os << " + ";
    first = false;
    os << p.label;
  }
  if (first) os << '0';
  return os.str();
}

// --------------------------------------------------------- RadonMeasureSpec

RadonMeasureSpec::RadonMeasureSpec(Density density, std::vector<PointMass> masses,
                                   std::optional<SupportSet> declared_support)
    : density_(std::move(density)), masses_(std::move(masses)) {
  for (const auto& m : masses_)
    if (!(m.mass >= 0.0) || !std::isfinite(m.location)) throw DomainError("point masses must be nonnegative");

  double peak = 0.0, low = 0.0;
  for (const auto& piece : density_.pieces()) {
    constexpr int kProbe = 2000;
    for (int i = 0; i <= kProbe; ++i) {
      const double x = piece.support.lo + piece.support.length() * i / kProbe;
      const double v = density_(x);
      peak = std::max(peak, std::abs(v));
      low = std::min(low, v);
    }
  }
  if (low < -1e-12 * std::max(peak, 1.0)) throw DomainError("measure density takes negative values");

  SupportSet natural = density_.support();
  for (const auto& m : masses_)
    if (m.mass > 0.0) natural = natural.united(SupportSet::point(m.location));
  if (declared_support) {
    if (!declared_support->includes(natural))
      throw DomainError("declared support does not contain where the measure's mass sits");
    support_ = std::move(*declared_support);
    declared_ = true;
  } else {
    support_ = std::move(natural);
  }
}

double RadonMeasureSpec::total_mass() const {
  double m = density_.integral();
  for (const auto& p : masses_) m += p.mass;
  return m;
}

double RadonMeasureSpec::integrate(const SmoothFunction& phi, int panels) const {
  double acc = density_.integrate_against(phi, panels);
  for (const auto& p : masses_) acc += p.mass * phi(p.location);
  return acc;
}

StructuredDistribution RadonMeasureSpec::as_distribution() const {
  std::vector<Atom> atoms;
  for (const auto& p : masses_) atoms.push_back({p.location, 0, p.mass});
  return StructuredDistribution(std::move(atoms), density_);
}

RadonMeasureSpec RadonMeasureSpec::scaled(double s) const {
  if (!(s >= 0.0)) throw DomainError("measures can only be scaled by nonnegative factors");
  auto masses = masses_;
  for (auto& m : masses) m.mass *= s;
  return RadonMeasureSpec(density_.scaled(s), std::move(masses),
                          declared_ ? std::optional<SupportSet>(support_) : std::nullopt);
}

// -------------------------------------------------------------- operations

double pair(const StructuredDistribution& eta, const SmoothFunction& phi, int panels) {
  double acc = 0.0;
  for (const auto& a : eta.atoms()) {
    const double d = phi.derivative(a.location, a.order);
    acc += a.coeff * (a.order % 2 ? -d : d);
  }
  return acc + eta.density().integrate_against(phi, panels);
}

double total_action_on_one(const StructuredDistribution& eta) {
  double acc = eta.density().integral();
  for (const auto& a : eta.atoms())
    if (a.order == 0) acc += a.coeff;
  return acc;
}

SupportSet support_of(const StructuredDistribution& eta) {
  SupportSet s = eta.density().support();
  for (const auto& a : eta.atoms()) s = s.united(SupportSet::point(a.location));
  return s;
}

SupportSet support_of(const RadonMeasureSpec& mu) { return mu.support(); }

GridSpec grid_covering(const SupportSet& support, double half_width, double max_spacing) {
  if (!(max_spacing > 0.0)) throw std::invalid_argument("grid spacing must be positive");
  const Interval h = support.empty() ? Interval{0.0, 0.0} : support.hull();
  const double margin = half_width + 4.0 * max_spacing;
  GridSpec g;
  g.lo = h.lo - margin;
  g.hi = h.hi + margin;
  g.n = static_cast<std::size_t>(std::ceil((g.hi - g.lo) / max_spacing)) + 1;
  g.n = std::max(g.n, GridFunction::kMinSamples);
  return g;
}

GridFunction convolve_mollifier(const ScaledMollifier& psi_eps, const StructuredDistribution& eta,
                                const GridSpec& grid, kernels::Exec exec) {
  const auto& atoms = eta.atoms();
  auto atom_part = [&](double x) {
    double acc = 0.0;
    for (const auto& a : atoms) {
      const double y = x - a.location;
      if (std::abs(y) >= psi_eps.support_half_width()) continue;
      acc += a.coeff * psi_eps.derivative(y, a.order);
    }
    return acc;
  };
  GridFunction out = GridFunction::sample(atom_part, grid.lo, grid.hi, grid.n, exec);
  const auto kernel = [&](double y) { return psi_eps(y); };
  for (const auto& piece : eta.density().pieces())
    kernels::convolve_piece(kernel, psi_eps.support_half_width(), piece.fn, piece.support.lo, piece.support.hi,
                            out.x_lo(), out.spacing(), 512, out.values(), exec);
  return out;
}

GridFunction convolve_mollifier(const ScaledMollifier& psi_eps, const StructuredDistribution& eta) {
  const double w = psi_eps.support_half_width();
  return convolve_mollifier(psi_eps, eta, grid_covering(support_of(eta), w, w / 100.0));
}

}  // namespace wdm

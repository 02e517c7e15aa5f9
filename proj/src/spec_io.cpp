#include "wdm/spec_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace wdm {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

double to_double(const std::string& s, const std::string& where) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw SpecError(where + ": expected a number, got '" + s + "'");
  }
  if (pos != s.size() || !std::isfinite(v)) throw SpecError(where + ": expected a number, got '" + s + "'");
  return v;
}

int to_int(const std::string& s, const std::string& where) {
  const double v = to_double(s, where);
  if (v != std::floor(v) || v < 0 || v > 64) throw SpecError(where + ": expected an order 0..64, got '" + s + "'");
  return static_cast<int>(v);
}

}  // namespace

GridFunction read_grid_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open grid file " + path.string());
  std::vector<double> xs, vs;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto f = split_fields(line);
    if (f.size() != 2) throw SpecError(path.string() + ": expected 'x,value' rows");
    try {
      std::size_t p1 = 0, p2 = 0;
      const double x = std::stod(f[0], &p1);
      const double v = std::stod(f[1], &p2);
      if (p1 != f[0].size() || p2 != f[1].size()) throw std::invalid_argument("trailing");
      xs.push_back(x);
      vs.push_back(v);
    } catch (const std::exception&) {
      if (!xs.empty()) throw SpecError(path.string() + ": malformed row '" + line + "'");
      // header row
    }
  }
  if (xs.size() < GridFunction::kMinSamples)
    throw SpecError(path.string() + ": need at least " + std::to_string(GridFunction::kMinSamples) + " samples");
  const double h = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
  if (!(h > 0.0)) throw SpecError(path.string() + ": x must increase");
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (std::abs(xs[i] - (xs.front() + static_cast<double>(i) * h)) > 1e-9 * std::max(1.0, std::abs(h) * xs.size()))
      throw SpecError(path.string() + ": grid spacing is not uniform");
  return GridFunction(xs.front(), xs.back(), std::move(vs));
}

SpecFile parse_spec(std::istream& in, const std::filesystem::path& base_dir, const std::string& source_name) {
  SpecFile spec;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = source_name + ":" + std::to_string(lineno);
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw SpecError(where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "name") {
      spec.name = value;
    } else if (key == "atom") {
      const auto f = split_fields(value);
      if (f.size() != 3) throw SpecError(where + ": atom needs 'p, k, c'");
      spec.atoms.push_back({to_double(f[0], where), to_int(f[1], where), to_double(f[2], where)});
    } else if (key == "density") {
      const auto f = split_fields(value);
      if (f.empty()) throw SpecError(where + ": empty density");
      if (f[0] == "uniform") {
        if (f.size() != 3 && f.size() != 4) throw SpecError(where + ": density = uniform, a, b[, weight]");
        const double a = to_double(f[1], where), b = to_double(f[2], where);
        const double w = f.size() == 4 ? to_double(f[3], where) : 1.0;
        if (!(b > a)) throw SpecError(where + ": uniform density needs a < b");
        spec.density += Density::uniform(a, b, w);
      } else if (f[0] == "grid") {
        if (f.size() != 2) throw SpecError(where + ": density = grid, <csv-path>");
        std::filesystem::path p = f[1];
        if (p.is_relative()) p = base_dir / p;
        spec.density += Density::grid(read_grid_csv(p), "grid(" + f[1] + ")");
      } else {
        throw SpecError(where + ": unknown density kind '" + f[0] + "'");
      }
      spec.density_lines.push_back(value);
    } else if (key == "support") {
      try {
        spec.support = SupportSet::parse(value);
      } catch (const std::exception& e) {
        throw SpecError(where + ": " + e.what());
      }
    } else {
      throw SpecError(where + ": unknown key '" + key + "'");
    }
  }
  return spec;
}

SpecFile read_spec_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open spec file " + path.string());
  return parse_spec(in, path.parent_path(), path.string());
}

StructuredDistribution to_distribution(const SpecFile& spec) {
  return StructuredDistribution(spec.atoms, spec.density);
}

RadonMeasureSpec to_measure(const SpecFile& spec) {
  std::vector<PointMass> masses;
  for (const auto& a : spec.atoms) {
    if (a.order != 0 || a.coeff < 0.0)
      throw SpecError(spec.name + ": a measure may only contain order-0 atoms with nonnegative mass");
    masses.push_back({a.location, a.coeff});
  }
  try {
    return RadonMeasureSpec(spec.density, std::move(masses), spec.support);
  } catch (const DomainError& e) {
    throw SpecError(spec.name + ": " + e.what());
  }
}

}  // namespace wdm

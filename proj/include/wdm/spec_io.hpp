#pragma once

// Line-oriented `key = value` spec files describing a distribution or measure:
//
//   # comment
//   name    = example
//   atom    = p, k, c              (repeatable; c ∂^k δ_p)
//   density = uniform, a, b[, w]   (repeatable; mass w spread evenly on [a, b])
//   density = grid, samples.csv    (x,value rows on a uniform grid; path relative to the spec file)
//   support = [a1,b1];[a2,b2]      (declared support override, measures only)

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wdm/distributions.hpp"

namespace wdm {

class SpecError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct SpecFile {
  std::string name;
  std::vector<Atom> atoms;
  Density density;
  std::vector<std::string> density_lines;
  std::optional<SupportSet> support;
};

SpecFile parse_spec(std::istream& in, const std::filesystem::path& base_dir, const std::string& source_name);
SpecFile read_spec_file(const std::filesystem::path& path);

StructuredDistribution to_distribution(const SpecFile& spec);
// Atoms must have order 0 and nonnegative coefficients (point masses).
RadonMeasureSpec to_measure(const SpecFile& spec);

// x,value rows; header and comment lines are skipped. Spacing must be uniform.
GridFunction read_grid_csv(const std::filesystem::path& path);

}  // namespace wdm

#pragma once

// Command-line front end: option parsing into a RunConfig and dispatch of the
// check, falsify, deform, velocity, fourier and cone subcommands.
//
// Data tables go to --out (stdout when absent); human-readable report lines go
// to stdout when --out is given and to stderr otherwise. Every table starts
// with '#' lines echoing the resolved configuration.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wdm/admissibility.hpp"

namespace wdm::cli {

enum class Command { check, falsify, deform, velocity, fourier, cone };
const char* to_string(Command c);

inline constexpr int kExitOk = 0;
inline constexpr int kExitNegative = 1;  // inadmissible, violated, counterexample found
inline constexpr int kExitError = 2;

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  Command command = Command::check;

  // inputs
  std::string mu_path;
  std::string eta_path;
  std::string nu_path;        // deform: second measure of the linear family
  std::string polytope_path;  // cone: CSV rows a_1, ..., a_d, b for a·x <= b

  // check / falsify
  Mode mode = Mode::one_sided;
  bool probability = false;
  std::size_t budget = 10000;
  std::uint64_t seed = 0;

  // deform
  std::string family = "explicit";  // explicit | delta | scaling | linear
  int k = 1;
  double q = 0.5;
  double c = 1.0;
  bool normalize = false;
  int levels = 14;
  std::optional<double> t_start;

  // velocity
  std::vector<double> eps = {0.2, 0.1, 0.05, 0.025, 0.0125};
  double cells_per_width = 4000.0;
  double tau = 1e-8;
  bool moderate = false;
  std::optional<std::pair<double, double>> window;  // K for exponent fits

  // fourier
  int N = 16;

  // cone
  std::vector<double> ball;  // center coordinates followed by the radius
  std::vector<double> point;
  std::vector<double> direction;
  int curve_levels = 20;

  // output
  std::string out;
  std::string summary;
  int jobs = 0;  // 0 keeps the OpenMP default
};

// Parses argv (argv[0] is the program name). A `--config file` of key = value
// lines supplies defaults for the subcommand's flags; unknown keys and
// malformed values raise UsageError. Returns nullopt when help was printed.
std::optional<RunConfig> parse_config(int argc, const char* const* argv, std::ostream& help_out);

// `# key = value` lines for every resolved field relevant to the subcommand.
std::vector<std::string> describe(const RunConfig& config);

// Executes the subcommand and returns the exit code. Module errors propagate
// as exceptions.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// parse_config + run with every error mapped to kExitError and a message on
// `err`.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wdm::cli

#include "wdm/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "wdm/caratheodory.hpp"
#include "wdm/cone.hpp"
#include "wdm/families.hpp"
#include "wdm/spec_io.hpp"
#include "wdm/transport.hpp"

namespace wdm::cli {

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x == 0.0 ? 0.0 : x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + num(v[i]);
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

const std::map<std::string, Command>& command_names() {
  static const std::map<std::string, Command> m = {{"check", Command::check},     {"falsify", Command::falsify},
                                                   {"deform", Command::deform},   {"velocity", Command::velocity},
                                                   {"fourier", Command::fourier}, {"cone", Command::cone}};
  return m;
}

// key = value lines turned into --key value tokens, skipping keys given on the
// command line. Relative input paths are taken relative to the config file.
std::vector<std::string> config_tokens(const std::string& path, const CLI::App& sub,
                                       const std::set<std::string>& given) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path);
  std::vector<std::string> tokens;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    const std::string where = path + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw UsageError(where + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (sub.get_option_no_throw("--" + key) == nullptr)
      throw UsageError(where + ": unknown key '" + key + "' for " + sub.get_name());
    if (key == "config") throw UsageError(where + ": config files cannot include other config files");
    if (given.count(key)) continue;
    std::string v = value;
    if (key == "mu" || key == "eta" || key == "nu" || key == "polytope") {
      const std::filesystem::path p(value);
      if (!p.is_absolute()) v = (std::filesystem::path(path).parent_path() / p).string();
    }
    tokens.push_back("--" + key + "=" + v);
  }
  return tokens;
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (item.empty() || pos != item.size() || !std::isfinite(v))
      throw UsageError(what + ": expected a comma-separated list of numbers, got '" + text + "'");
    out.push_back(v);
  }
  if (out.empty()) throw UsageError(what + ": empty list");
  return out;
}

// ----------------------------------------------------------------- outputs

// Table sink: --out file or `fallback`.
class Sink {
public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (path.empty() || path == "-") {
      os_ = &fallback;
    } else {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::runtime_error("cannot write " + path);
      os_ = file_.get();
    }
  }
  std::ostream& operator*() { return *os_; }

private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_ = nullptr;
};

void write_header(std::ostream& os, const RunConfig& cfg, const std::string& table) {
  os << "# wdm " << to_string(cfg.command) << " (" << table << ")\n";
  for (const auto& l : describe(cfg)) os << l << '\n';
}

RadonMeasureSpec load_measure(const std::string& path, const char* flag) {
  if (path.empty()) throw UsageError(std::string(flag) + " is required");
  return to_measure(read_spec_file(path));
}

StructuredDistribution load_distribution(const std::string& path, const char* flag) {
  if (path.empty()) throw UsageError(std::string(flag) + " is required");
  return to_distribution(read_spec_file(path));
}

const Mollifier& standard_mollifier() {
  static const Mollifier m = build_mollifier(0.5);
  return m;
}

// ---------------------------------------------------------------- commands

int run_check(const RunConfig& cfg, std::ostream& table, std::ostream& report) {
  const auto mu = load_measure(cfg.mu_path, "--mu");
  const auto eta = load_distribution(cfg.eta_path, "--eta");
  CheckOptions opts;
  opts.check_probability = cfg.probability;
  opts.falsify.budget = cfg.budget;
  opts.falsify.seed = cfg.seed;
  const Verdict v = check(mu, eta, cfg.mode, opts);

  table << "rule,subject,satisfied,note\n";
  for (const auto& r : v.trace)
    table << csv_field(r.rule) << ',' << csv_field(r.subject) << ',' << (r.satisfied ? "true" : "false") << ','
          << csv_field(r.note) << '\n';

  report << "verdict: " << (v.admissible ? "admissible" : "inadmissible") << " (" << to_string(v.mode) << ")\n";
  for (const auto& r : v.trace)
    report << "  " << r.rule << " [" << (r.satisfied ? "ok" : "FAIL") << "] " << r.subject << ": " << r.note << '\n';
  if (v.probability_constraint_ok)
    report << "probability constraint <eta, 1> = 0: " << (*v.probability_constraint_ok ? "holds" : "fails") << '\n';
  if (v.counterexample) {
    const auto& c = *v.counterexample;
    report << "counterexample: " << c.spec.describe() << " pairing = " << num(c.value) << " (panels " << c.panels
           << ")\n";
  }
  const bool ok = v.admissible && v.probability_constraint_ok.value_or(true);
  return ok ? kExitOk : kExitNegative;
}

int run_falsify(const RunConfig& cfg, std::ostream& table, std::ostream& report) {
  const auto mu = load_measure(cfg.mu_path, "--mu");
  const auto eta = load_distribution(cfg.eta_path, "--eta");
  FalsifyOptions opts;
  opts.mode = cfg.mode;
  opts.budget = cfg.budget;
  opts.seed = cfg.seed;
  const auto ce = falsify(mu, eta, opts);

  table << "kind,center,width,pin_order,tilt,value,panels\n";
  if (ce) {
    const auto& s = ce->spec;
    table << (s.kind == TestFunctionSpec::Kind::pinned_bump ? "pinned_bump" : "free_bump") << ',' << num(s.center)
          << ',' << num(s.width) << ',' << s.pin_order << ',' << num(s.tilt) << ',' << num(ce->value) << ','
          << ce->panels << '\n';
    report << "counterexample: " << s.describe() << " pairing = " << num(ce->value) << '\n';
    return kExitNegative;
  }
  report << "no counterexample among " << cfg.budget << " candidates (not a proof of admissibility)\n";
  return kExitOk;
}

MeasureFamily build_family(const RunConfig& cfg) {
  const std::string& f = cfg.family;
  std::optional<MeasureFamily> fam;
  if (f == "explicit") fam = explicit_family(cfg.k, cfg.q, standard_mollifier());
  else if (f == "delta") fam = delta_family();
  else if (f == "scaling") fam = scaling_family(load_measure(cfg.mu_path, "--mu"), cfg.c);
  else if (f == "linear") fam = linear_family(load_measure(cfg.mu_path, "--mu"), load_measure(cfg.nu_path, "--nu"));
  else throw UsageError("unknown family '" + f + "' (explicit, delta, scaling, linear)");
  return cfg.normalize ? normalize_to_probability(*fam) : *fam;
}

int run_deform(const RunConfig& cfg, std::ostream& table, std::ostream& summary, std::ostream& report) {
  const MeasureFamily fam = build_family(cfg);
  const auto battery = standard_battery(standard_mollifier());
  WeakDerivativeOptions opts;
  opts.levels = cfg.levels;
  opts.t_start = cfg.t_start;
  const double t_start = cfg.t_start.value_or(std::min(fam.t_max() / 4.0, 0.1));
  const auto rows = verify_weak_derivative(fam, battery, opts);

  table << "t,phi_id,integral\n";
  std::vector<double> ts = {0.0};
  for (int j = 0; j <= cfg.levels; ++j) ts.push_back(std::ldexp(t_start, -j));
  for (std::size_t i = 0; i < battery.size(); ++i)
    for (double t : ts) table << num(t) << ',' << i << ',' << num(fam.integrate(battery[i], t)) << '\n';

  summary << "phi_id,estimate,target,abs_err\n";
  for (std::size_t i = 0; i < rows.size(); ++i)
    summary << i << ',' << num(rows[i].estimate) << ',' << num(rows[i].target) << ',' << num(rows[i].abs_err) << '\n';

  report << "family: " << fam.name() << ", t_max = " << num(fam.t_max()) << ", target " << fam.target().describe()
         << '\n';
  for (std::size_t i = 0; i < rows.size(); ++i)
    report << "  phi " << i << " = " << rows[i].phi << ": estimate " << num(rows[i].estimate) << ", target "
           << num(rows[i].target) << ", rel err " << num(rows[i].rel_err) << '\n';
  return kExitOk;
}

int run_velocity(const RunConfig& cfg, std::ostream& table, std::ostream& summary, std::ostream& report) {
  const auto mu = load_measure(cfg.mu_path, "--mu");
  const auto eta = load_distribution(cfg.eta_path, "--eta");
  VelocityOptions opts;
  opts.ladder = cfg.eps;
  opts.cells_per_width = cfg.cells_per_width;
  opts.tau = cfg.tau;
  const auto levels = velocity_representative(mu, eta, standard_mollifier(), opts);

  table << "epsilon,x,f_eps,g_eps,v_eps\n";
  for (const auto& L : levels)
    for (std::size_t i = 0; i < L.f.size(); ++i)
      table << num(L.eps) << ',' << num(L.f.x(i)) << ',' << num(L.f[i]) << ',' << num(L.g[i]) << ','
            << num(L.solution.v[i]) << '\n';

  summary << "epsilon,residual,sup_v\n";
  for (const auto& L : levels) {
    summary << num(L.eps) << ',' << num(L.solution.residual) << ',' << num(L.sup_v) << '\n';
    report << "eps " << num(L.eps) << ": grid " << L.f.size() << " points, mass " << num(L.mass) << ", residual "
           << num(L.solution.residual) << " (" << num(L.sup_g > 0 ? L.solution.residual / L.sup_g : 0.0)
           << " of sup|g|), sup|v| " << num(L.sup_v) << '\n';
  }

  if (cfg.moderate) {
    const Interval hull = support_of(mu).hull();
    const Interval K = cfg.window ? Interval{cfg.window->first, cfg.window->second} : hull;
    GridFamily f_fam, v_fam;
    for (const auto& L : levels) {
      f_fam.eps.push_back(L.eps);
      f_fam.f.push_back(L.f);
      v_fam.eps.push_back(L.eps);
      v_fam.f.push_back(L.solution.v);
    }
    for (const auto& [label, fam] : {std::pair{"f_eps", &f_fam}, std::pair{"v_eps", &v_fam}}) {
      const auto fit = moderateness_estimate(*fam, K);
      report << "moderateness " << label << " on [" << num(K.lo) << ", " << num(K.hi) << "]: N = " << num(fit.N)
             << ", c = " << num(fit.c) << ", r2 = " << num(fit.r2) << '\n';
    }
  }
  return kExitOk;
}

int run_fourier(const RunConfig& cfg, std::ostream& table, std::ostream& report) {
  if (cfg.N < 0) throw UsageError("--N must be >= 0");
  const auto mu = load_measure(cfg.mu_path, "--mu");
  const Interval h = support_of(mu).hull();
  constexpr double kTwoPi = 6.283185307179586;
  auto require_circle = [&](const Interval& iv, const char* what) {
    if (iv.lo < -kLocationTol || iv.hi > kTwoPi + kLocationTol)
      throw DomainError(std::string(what) + " must be given in the angle coordinate on [0, 2pi]");
  };
  require_circle(h, "--mu");
  const FourierData a0 = fourier_coefficients(mu, cfg.N);
  std::optional<FourierData> a1;
  if (!cfg.eta_path.empty()) {
    const auto eta = load_distribution(cfg.eta_path, "--eta");
    if (!eta.is_zero()) require_circle(support_of(eta).hull(), "--eta");
    a1 = fourier_coefficients(eta, cfg.N);
  }

  table << "n,re_a,im_a" << (a1 ? ",re_da,im_da" : "") << '\n';
  for (int n = -cfg.N; n <= cfg.N; ++n) {
    table << n << ',' << num(a0[n].real()) << ',' << num(a0[n].imag());
    if (a1) table << ',' << num((*a1)[n].real()) << ',' << num((*a1)[n].imag());
    table << '\n';
  }

  const auto psd = toeplitz_psd(a0);
  report << "toeplitz N = " << cfg.N << ": " << (psd.is_psd ? "PSD" : "not PSD") << ", min eigenvalue "
         << num(psd.min_eigenvalue) << '\n';
  if (!psd.is_psd) return kExitNegative;
  if (!a1) return kExitOk;
  bool violated = false;
  for (int n = 0; n <= cfg.N; ++n) {
    const auto t = tangent_condition(a0, *a1, n);
    report << "tangent condition N = " << n << ": " << (t.satisfied ? "satisfied" : "violated") << " (kernel dim "
           << t.kernel_dimension << ", min projected eigenvalue " << num(t.min_projected_eigenvalue) << ")\n";
    violated = violated || !t.satisfied;
  }
  report << (violated ? "verdict: violated (conclusive)\n"
                      : "verdict: satisfied up to frequency " + std::to_string(cfg.N) + "\n");
  return violated ? kExitNegative : kExitOk;
}

cone::ConvexBody load_body(const RunConfig& cfg) {
  if (!cfg.polytope_path.empty() == !cfg.ball.empty()) throw UsageError("give exactly one of --polytope, --ball");
  if (!cfg.ball.empty()) {
    if (cfg.ball.size() < 2) throw UsageError("--ball needs center coordinates followed by the radius");
    cone::Vec c(static_cast<Eigen::Index>(cfg.ball.size() - 1));
    for (Eigen::Index i = 0; i < c.size(); ++i) c[i] = cfg.ball[static_cast<std::size_t>(i)];
    return cone::ConvexBody::ball(c, cfg.ball.back());
  }
  std::ifstream in(cfg.polytope_path);
  if (!in) throw UsageError("cannot open polytope file " + cfg.polytope_path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    rows.push_back(parse_list(line, cfg.polytope_path));
    if (rows.back().size() != rows.front().size() || rows.back().size() < 2)
      throw UsageError(cfg.polytope_path + ": rows must all have d + 1 >= 2 entries");
  }
  if (rows.empty()) throw UsageError(cfg.polytope_path + ": no constraint rows");
  const auto m = static_cast<Eigen::Index>(rows.size());
  const auto d = static_cast<Eigen::Index>(rows.front().size() - 1);
  cone::Mat A(m, d);
  cone::Vec b(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) A(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    b[i] = rows[static_cast<std::size_t>(i)].back();
  }
  return cone::ConvexBody::polytope(A, b);
}

int run_cone(const RunConfig& cfg, std::ostream& table, std::ostream& report) {
  const auto C = load_body(cfg);
  auto to_vec = [&](const std::vector<double>& v, const char* flag) {
    if (static_cast<int>(v.size()) != C.dim())
      throw UsageError(std::string(flag) + " must have " + std::to_string(C.dim()) + " coordinates");
    return cone::Vec(Eigen::Map<const cone::Vec>(v.data(), static_cast<Eigen::Index>(v.size())));
  };
  const cone::Vec p = to_vec(cfg.point, "--point");
  const cone::Vec v = to_vec(cfg.direction, "--direction");
  if (!C.contains(p)) throw DomainError("--point lies outside the body (residual " + num(C.residual(p)) + ")");

  const auto cls = cone::classify_direction(C, p, v);
  report << "direction: " << cone::to_string(cls.kind) << ", min theta(v) = " << num(cls.min_theta) << ", "
         << cls.functionals.size() << " normal functional(s)\n";
  std::string header = "t";
  for (int j = 0; j < C.dim(); ++j) header += ",c" + std::to_string(j + 1);
  table << header << ",quotient_error\n";
  if (cls.kind == cone::DirectionClass::outside) {
    std::vector<double> theta(cls.certificate->data(), cls.certificate->data() + cls.certificate->size());
    report << "certificate theta = (" << join(theta) << "): theta >= 0 on C - p and theta(v) < 0\n";
    return kExitNegative;
  }
  cone::CurveOptions co;
  co.levels = cfg.curve_levels;
  const auto curve = cone::construct_curve(C, p, v, co);
  const auto check = cone::verify_curve_derivative(curve, p, v, curve.times());
  for (std::size_t j = 0; j < curve.times().size(); ++j) {
    table << num(curve.times()[j]);
    for (Eigen::Index i = 0; i < curve.points()[j].size(); ++i) table << ',' << num(curve.points()[j][i]);
    table << ',' << num(check.errors[j]) << '\n';
  }
  report << "curve: " << curve.times().size() << " nodes, max quotient error " << num(check.max_error);
  if (check.observed_rate) report << ", observed rate " << num(*check.observed_rate);
  report << '\n';
  return kExitOk;
}

}  // namespace

const char* to_string(Command c) {
  for (const auto& [name, cmd] : command_names())
    if (cmd == c) return name.c_str();
  return "?";
}

std::optional<RunConfig> parse_config(int argc, const char* const* argv, std::ostream& help_out) {
  RunConfig cfg;
  CLI::App app{"Weak derivatives of measure families: admissibility, deformations, transport velocities"};
  app.name("wdm");
  app.require_subcommand(1, 1);
  app.set_help_flag("-h,--help", "Print help");

  std::string config_path;
  std::string mode = "one_sided";
  std::string eps_text;
  std::string ball_text, point_text, direction_text, window_text;
  double t_start = 0.0;

  const std::map<std::string, Mode> modes = {{"one_sided", Mode::one_sided}, {"two_sided", Mode::two_sided}};
  std::map<std::string, CLI::App*> subs;
  const std::map<std::string, std::string> blurbs = {
      {"check", "admissibility verdict with rule trace"},
      {"falsify", "search for a test function refuting admissibility"},
      {"deform", "weak derivative of a measure family against a test battery"},
      {"velocity", "mollified velocity fields solving the continuity equation"},
      {"fourier", "Toeplitz positivity and tangent condition on the circle"},
      {"cone", "tangent cone classification and curve construction"},
  };
  for (const auto& [name, cmd] : command_names()) {
    CLI::App* s = app.add_subcommand(name, blurbs.at(name));
    subs[name] = s;
    s->add_option("--config", config_path, "key = value file supplying defaults for this subcommand");
    s->add_option("--out", cfg.out, "table output path (stdout when absent)");
    s->add_option("--jobs", cfg.jobs, "OpenMP threads (0 keeps the default)")->check(CLI::NonNegativeNumber);
  }
  for (const char* name : {"check", "falsify"}) {
    auto* s = subs[name];
    s->add_option("--mu", cfg.mu_path, "measure spec file")->required();
    s->add_option("--eta", cfg.eta_path, "distribution spec file")->required();
    s->add_option("--mode", mode, "one_sided or two_sided")->check(CLI::IsMember({"one_sided", "two_sided"}));
    s->add_option("--budget", cfg.budget, "falsifier evaluations")->check(CLI::PositiveNumber);
    s->add_option("--seed", cfg.seed, "falsifier seed");
  }
  subs["check"]->add_flag("--probability", cfg.probability, "also require <eta, 1> = 0");

  auto* deform = subs["deform"];
  deform->add_option("--family", cfg.family, "explicit, delta, scaling or linear")
      ->check(CLI::IsMember({"explicit", "delta", "scaling", "linear"}));
  deform->add_option("--k", cfg.k, "derivative order (explicit)")->check(CLI::Range(1, 8));
  deform->add_option("--q", cfg.q, "amplitude exponent in (0, 1) (explicit)");
  deform->add_option("--c", cfg.c, "rate (scaling)");
  deform->add_option("--mu", cfg.mu_path, "base measure (scaling, linear)");
  deform->add_option("--nu", cfg.nu_path, "added measure (linear)");
  deform->add_flag("--normalize", cfg.normalize, "divide by total mass");
  deform->add_option("--levels", cfg.levels, "Richardson levels")->check(CLI::Range(2, 40));
  auto* t_opt = deform->add_option("--t-start", t_start, "first ladder point")->check(CLI::PositiveNumber);
  deform->add_option("--summary", cfg.summary, "summary table path (report stream when absent)");

  auto* velocity = subs["velocity"];
  velocity->add_option("--mu", cfg.mu_path, "measure spec file")->required();
  velocity->add_option("--eta", cfg.eta_path, "distribution spec file")->required();
  auto* eps_opt = velocity->add_option("--eps", eps_text, "comma-separated epsilon ladder");
  velocity->add_option("--cells-per-width", cfg.cells_per_width, "grid cells per mollifier half-width")
      ->check(CLI::PositiveNumber);
  velocity->add_option("--tau", cfg.tau, "mask threshold relative to max f_eps")->check(CLI::PositiveNumber);
  velocity->add_flag("--moderate", cfg.moderate, "report moderateness exponent fits");
  auto* window_opt = velocity->add_option("--window", window_text, "a,b: interval K for exponent fits");
  velocity->add_option("--summary", cfg.summary, "summary table path (report stream when absent)");

  auto* fourier = subs["fourier"];
  fourier->add_option("--mu", cfg.mu_path, "measure spec on [0, 2pi]")->required();
  fourier->add_option("--eta", cfg.eta_path, "derivative spec on [0, 2pi]");
  fourier->add_option("--N", cfg.N, "maximal frequency")->check(CLI::Range(0, 512));

  auto* cone_cmd = subs["cone"];
  cone_cmd->add_option("--polytope", cfg.polytope_path, "CSV rows a_1, ..., a_d, b of a.x <= b");
  auto* ball_opt = cone_cmd->add_option("--ball", ball_text, "c_1,...,c_d,r");
  cone_cmd->add_option("--point", point_text, "p_1,...,p_d")->required();
  cone_cmd->add_option("--direction", direction_text, "v_1,...,v_d")->required();
  cone_cmd->add_option("--levels", cfg.curve_levels, "curve nodes")->check(CLI::Range(1, 60));

  // Locate the subcommand and the long options given explicitly so that a
  // config file only fills the rest.
  std::vector<std::string> args(argv + 1, argv + argc);
  std::vector<std::string> tokens = args;
  auto sub_it = std::find_if(args.begin(), args.end(), [](const std::string& a) { return command_names().count(a); });
  const auto cfg_it = std::find_if(args.begin(), args.end(),
                                   [](const std::string& a) { return a == "--config" || a.rfind("--config=", 0) == 0; });
  if (sub_it != args.end() && cfg_it != args.end()) {
    std::string path;
    if (*cfg_it == "--config") {
      if (cfg_it + 1 == args.end()) throw UsageError("--config needs a path");
      path = *(cfg_it + 1);
    } else {
      path = cfg_it->substr(9);
    }
    std::set<std::string> given;
    for (const auto& a : args)
      if (a.rfind("--", 0) == 0) given.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2));
    const auto extra = config_tokens(path, *subs[*sub_it], given);
    const auto pos = static_cast<std::size_t>(sub_it - args.begin()) + 1;
    tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(pos), extra.begin(), extra.end());
  }

  std::vector<std::string> reversed(tokens.rbegin(), tokens.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    help_out << app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  for (const auto& [name, s] : subs)
    if (s->parsed()) cfg.command = command_names().at(name);
  cfg.mode = modes.at(mode);
  if (t_opt->count()) cfg.t_start = t_start;
  if (eps_opt->count()) {
    cfg.eps = parse_list(eps_text, "--eps");
    std::sort(cfg.eps.begin(), cfg.eps.end(), std::greater<>());
    if (std::adjacent_find(cfg.eps.begin(), cfg.eps.end()) != cfg.eps.end())
      throw UsageError("--eps: repeated value");
    for (double e : cfg.eps)
      if (!(e > 0.0 && e < 1.0)) throw UsageError("--eps: values must lie in (0, 1)");
  }
  if (window_opt->count()) {
    const auto w = parse_list(window_text, "--window");
    if (w.size() != 2 || !(w[0] < w[1])) throw UsageError("--window: expected a,b with a < b");
    cfg.window = std::pair{w[0], w[1]};
  }
  if (ball_opt->count()) cfg.ball = parse_list(ball_text, "--ball");
  if (!point_text.empty()) cfg.point = parse_list(point_text, "--point");
  if (!direction_text.empty()) cfg.direction = parse_list(direction_text, "--direction");
  if (cfg.command == Command::deform && !(cfg.q > 0.0 && cfg.q < 1.0)) throw UsageError("--q must lie in (0, 1)");

  for (const auto& path : {cfg.mu_path, cfg.eta_path, cfg.nu_path, cfg.polytope_path})
    if (!path.empty() && !std::ifstream(path)) throw UsageError("cannot open input file " + path);
  return cfg;
}

std::vector<std::string> describe(const RunConfig& c) {
  std::vector<std::pair<std::string, std::string>> kv = {{"command", to_string(c.command)}};
  auto add = [&](const std::string& k, const std::string& v) { kv.emplace_back(k, v); };
  switch (c.command) {
    case Command::check:
    case Command::falsify:
      add("mu", c.mu_path);
      add("eta", c.eta_path);
      add("mode", to_string(c.mode));
      if (c.command == Command::check) add("probability", c.probability ? "true" : "false");
      add("budget", std::to_string(c.budget));
      add("seed", std::to_string(c.seed));
      break;
    case Command::deform:
      add("family", c.family);
      if (c.family == "explicit") {
        add("k", std::to_string(c.k));
        add("q", num(c.q));
      }
      if (c.family == "scaling") add("c", num(c.c));
      if (c.family == "scaling" || c.family == "linear") add("mu", c.mu_path);
      if (c.family == "linear") add("nu", c.nu_path);
      add("normalize", c.normalize ? "true" : "false");
      add("levels", std::to_string(c.levels));
      add("t_start", c.t_start ? num(*c.t_start) : "auto");
      break;
    case Command::velocity:
      add("mu", c.mu_path);
      add("eta", c.eta_path);
      add("eps", join(c.eps));
      add("cells_per_width", num(c.cells_per_width));
      add("tau", num(c.tau));
      add("moderate", c.moderate ? "true" : "false");
      if (c.window) add("window", num(c.window->first) + "," + num(c.window->second));
      break;
    case Command::fourier:
      add("mu", c.mu_path);
      add("eta", c.eta_path.empty() ? "none" : c.eta_path);
      add("N", std::to_string(c.N));
      break;
    case Command::cone:
      if (!c.polytope_path.empty()) add("polytope", c.polytope_path);
      if (!c.ball.empty()) add("ball", join(c.ball));
      add("point", join(c.point));
      add("direction", join(c.direction));
      add("levels", std::to_string(c.curve_levels));
      break;
  }
  std::vector<std::string> out;
  for (const auto& [k, v] : kv) out.push_back("# " + k + " = " + v);
  return out;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.jobs > 0) kernels::set_thread_count(cfg.jobs);
  std::ostream& report = cfg.out.empty() || cfg.out == "-" ? err : out;
  Sink table(cfg.out, out);
  std::ostringstream body;
  int code = kExitOk;
  switch (cfg.command) {
    case Command::check: code = run_check(cfg, body, report); break;
    case Command::falsify: code = run_falsify(cfg, body, report); break;
    case Command::fourier: code = run_fourier(cfg, body, report); break;
    case Command::cone: code = run_cone(cfg, body, report); break;
    case Command::deform:
    case Command::velocity: {
      std::ostringstream sum;
      code = cfg.command == Command::deform ? run_deform(cfg, body, sum, report) : run_velocity(cfg, body, sum, report);
      if (cfg.summary.empty()) {
        report << sum.str();
      } else {
        Sink s(cfg.summary, out);
        write_header(*s, cfg, "summary");
        *s << sum.str();
      }
      break;
    }
  }
  write_header(*table, cfg, "table");
  *table << body.str();
  return code;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    const auto cfg = parse_config(argc, argv, out);
    if (!cfg) return kExitOk;
    return run(*cfg, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace wdm::cli

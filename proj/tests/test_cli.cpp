#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "wdm/cli.hpp"
#include "wdm/spec_io.hpp"

using namespace wdm::cli;

namespace {

const std::string kFixtures = WDM_FIXTURE_DIR;

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "wdm");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Outcome o;
  o.code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

RunConfig parse(std::vector<std::string> args) {
  args.insert(args.begin(), "wdm");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream help;
  const auto cfg = parse_config(static_cast<int>(argv.size()), argv.data(), help);
  REQUIRE(cfg.has_value());
  return *cfg;
}

std::filesystem::path temp_file(const std::string& name, const std::string& contents) {
  const auto p = std::filesystem::temp_directory_path() / ("wdm_test_cli_" + name);
  std::ofstream(p) << contents;
  return p;
}

// Data rows of a CSV table (comment lines and the column header removed).
std::vector<std::vector<std::string>> rows_of(const std::string& csv) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(csv);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) f.push_back(item);
    rows.push_back(f);
  }
  return rows;
}

}  // namespace

TEST_CASE("parse_config") {
  const std::string mu = kFixtures + "/ex3_4/mu.spec";
  const std::string eta = kFixtures + "/ex3_4/eta.spec";
  const auto c = parse({"check", "--mu", mu, "--eta", eta, "--mode", "two_sided"});
  CHECK(c.command == Command::check);
  CHECK(c.mode == wdm::Mode::two_sided);
  CHECK(c.budget == 10000);

  const auto v = parse({"velocity", "--mu", mu, "--eta", eta, "--eps", "0.05,0.2,0.1"});
  CHECK(v.eps == std::vector<double>{0.2, 0.1, 0.05});
  CHECK(parse({"velocity", "--mu", mu, "--eta", eta}).eps.size() == 5);

  // config supplies defaults, explicit flags win, relative paths follow the config file
  const auto cfg = temp_file("check.cfg", "mode = two_sided\nbudget = 77\nprobability = true\n");
  const auto fc = parse({"check", "--config", cfg.string(), "--mu", mu, "--eta", eta, "--budget", "5"});
  CHECK(fc.mode == wdm::Mode::two_sided);
  CHECK(fc.budget == 5);
  CHECK(fc.probability);
  const auto rel = parse({"check", "--config", kFixtures + "/ex3_4/run.cfg"});
  CHECK(std::filesystem::equivalent(rel.mu_path, mu));

  CHECK_THROWS_AS(parse({"check", "--mu", mu}), UsageError);
  CHECK_THROWS_AS(parse({"check", "--mu", mu, "--eta", eta, "--mode", "sideways"}), UsageError);
  CHECK_THROWS_AS(parse({"check", "--mu", mu, "--eta", eta, "--bogus", "1"}), UsageError);
  CHECK_THROWS_AS(parse({"velocity", "--mu", mu, "--eta", eta, "--eps", "0.1,x"}), UsageError);
  CHECK_THROWS_AS(parse({"velocity", "--mu", mu, "--eta", eta, "--eps", "0.1,1.5"}), UsageError);
  const auto bad = temp_file("bad.cfg", "colour = blue\n");
  CHECK_THROWS_AS(parse({"check", "--config", bad.string(), "--mu", mu, "--eta", eta}), UsageError);
  CHECK_THROWS_AS(parse({"frobnicate"}), UsageError);
}

TEST_CASE("usage errors exit 2 and name the missing path") {
  const auto o = invoke({"check", "--mu", "/nonexistent/mu.spec", "--eta", kFixtures + "/ex3_4/eta.spec"});
  CHECK(o.code == kExitError);
  CHECK(o.err.find("/nonexistent/mu.spec") != std::string::npos);
  CHECK(invoke({"check", "--config", "/nonexistent/run.cfg"}).code == kExitError);
  CHECK(invoke({"--help"}).code == kExitOk);
}

TEST_CASE("check fixtures") {
  struct Case {
    std::string cfg;
    int code;
  };
  for (const auto& [cfg, code] : std::vector<Case>{{"ex3_4/run.cfg", 0},
                                                   {"ex3_5/run.cfg", 0},
                                                   {"ex3_8/run_first_order.cfg", 0},
                                                   {"ex3_8/run_second_order.cfg", 1},
                                                   {"ex3_9/run.cfg", 0},
                                                   {"ex3_13/run.cfg", 0}}) {
    INFO(cfg);
    const auto o = invoke({"check", "--config", kFixtures + "/" + cfg});
    CHECK(o.code == code);
    CHECK(o.out.rfind("# wdm check", 0) == 0);
    CHECK(o.err.find("verdict: ") != std::string::npos);
  }
  const auto spec = temp_file("third.spec", "atom = 0, 3, 1\n");
  const auto o = invoke({"check", "--mu", kFixtures + "/ex3_4/mu.spec", "--eta", spec.string()});
  CHECK(o.code == kExitNegative);
  CHECK(o.err.find("counterexample: ") != std::string::npos);
  CHECK(o.err.find("pinned") != std::string::npos);

  const auto f = invoke({"falsify", "--mu", kFixtures + "/ex3_4/mu.spec", "--eta", spec.string()});
  CHECK(f.code == kExitNegative);
  const auto rows = rows_of(f.out);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0][0] == "pinned_bump");
  CHECK(std::stod(rows[0][5]) < -1e-9);
}

TEST_CASE("velocity fixture table") {
  const auto o = invoke({"velocity", "--config", kFixtures + "/ex3_15/run.cfg"});
  REQUIRE(o.code == kExitOk);
  CHECK(o.out.find("# eps = 0.20000000000000001,") != std::string::npos);
  double max_f = 0.0;
  const auto rows = rows_of(o.out);
  for (const auto& r : rows) max_f = std::max(max_f, std::stod(r[2]));
  double dev = 0.0;
  std::size_t on_mask = 0;
  for (const auto& r : rows) {
    if (std::stod(r[2]) > 1e-8 * max_f) {
      ++on_mask;
      dev = std::max(dev, std::abs(std::stod(r[4]) - 1.0));
    }
  }
  CHECK(on_mask > 1000);
  CHECK(dev <= 1e-4);
  CHECK(o.err.find("residual") != std::string::npos);
}

TEST_CASE("deform, fourier and cone") {
  const auto d = invoke({"deform", "--config", kFixtures + "/ex3_3/run.cfg"});
  CHECK(d.code == kExitOk);
  CHECK(rows_of(d.out).size() == 10 * 16);
  CHECK(d.err.find("phi_id,estimate,target,abs_err") != std::string::npos);

  const auto f = invoke({"fourier", "--config", kFixtures + "/circle/run.cfg"});
  CHECK(f.code == kExitOk);
  CHECK(rows_of(f.out).size() == 33);
  CHECK(f.err.find("satisfied up to frequency 16") != std::string::npos);
  const auto fv = invoke({"fourier", "--config", kFixtures + "/circle/run.cfg", "--eta",
                          kFixtures + "/circle/eta_second_order.spec"});
  CHECK(fv.code == kExitNegative);

  const auto c = invoke({"cone", "--config", kFixtures + "/cone/run.cfg"});
  CHECK(c.code == kExitOk);
  CHECK(rows_of(c.out).size() == 20);
  const auto out = invoke({"cone", "--config", kFixtures + "/cone/run.cfg", "--direction", "1,1"});
  CHECK(out.code == kExitNegative);
  CHECK(out.err.find("certificate") != std::string::npos);
  const auto ball = invoke({"cone", "--ball", "0,0,1", "--point", "1,0", "--direction", "0,1"});
  CHECK(ball.code == kExitOk);
  CHECK(ball.err.find("in_closure_only") != std::string::npos);
  CHECK(invoke({"cone", "--ball", "0,0,1", "--point", "1,0,0", "--direction", "0,1"}).code == kExitError);
}

TEST_CASE("output files and determinism") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto a = (dir / "wdm_test_cli_a.csv").string();
  const auto b = (dir / "wdm_test_cli_b.csv").string();
  const auto sa = (dir / "wdm_test_cli_sa.csv").string();
  const auto sb = (dir / "wdm_test_cli_sb.csv").string();
  const auto slurp = [](const std::string& p) {
    std::ifstream in(p);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"velocity", "--config", kFixtures + "/ex3_15/run.cfg"},
           {"falsify", "--mu", kFixtures + "/ex3_9/mu.spec", "--eta", kFixtures + "/ex3_4/eta.spec", "--seed", "7",
            "--budget", "500"},
           {"deform", "--config", kFixtures + "/ex3_11/run_k1.cfg"}}) {
    auto first = args, second = args;
    first.insert(first.end(), {"--out", a});
    second.insert(second.end(), {"--out", b});
    if (args[0] != "falsify") {
      first.insert(first.end(), {"--summary", sa});
      second.insert(second.end(), {"--summary", sb});
    }
    const auto r1 = invoke(first);
    const auto r2 = invoke(second);
    INFO(args[0]);
    CHECK(r1.code == r2.code);
    CHECK(r1.out == r2.out);
    const auto t1 = slurp(a);
    CHECK(t1.rfind("# wdm " + args[0], 0) == 0);
    CHECK(t1 == slurp(b));
    if (args[0] != "falsify") {
      CHECK(slurp(sa).rfind("# wdm " + args[0] + " (summary)", 0) == 0);
      CHECK(slurp(sa) == slurp(sb));
    }
  }
}

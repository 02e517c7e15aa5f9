// Wall-clock comparison of the serial and OpenMP kernels.
//
//   bench_kernels [repeats]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "wdm/admissibility.hpp"
#include "wdm/distributions.hpp"
#include "wdm/kernels.hpp"
#include "wdm/mollifier.hpp"

using namespace wdm;

namespace {

double best_seconds(int repeats, const std::function<void()>& body) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    body();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

void report(const std::string& name, int repeats, const std::function<std::vector<double>(kernels::Exec)>& run) {
  std::vector<double> s, p;
  const double ts = best_seconds(repeats, [&] { s = run(kernels::Exec::serial); });
  const double tp = best_seconds(repeats, [&] { p = run(kernels::Exec::parallel); });
  const bool same = s.size() == p.size() && std::memcmp(s.data(), p.data(), s.size() * sizeof(double)) == 0;
  std::printf("%-28s %12.4f %12.4f %8.2fx  %s\n", name.c_str(), ts, tp, ts / tp, same ? "identical" : "DIFFER");
}

}  // namespace

int main(int argc, char** argv) {
  const int repeats = argc > 1 ? std::max(1, std::atoi(argv[1])) : 3;
  std::printf("threads: %d, repeats: %d (best time reported)\n", kernels::thread_count(), repeats);
  std::printf("%-28s %12s %12s %9s  %s\n", "kernel", "serial [s]", "omp [s]", "speedup", "results");

  const kernels::Fn1 f = [](double x) { return std::sin(3.0 * x) * std::exp(-x * x); };
  report("sample 4e6", repeats, [&](kernels::Exec e) {
    std::vector<double> out(4'000'000);
    kernels::sample(f, -2.0, 1e-6, out, e);
    return out;
  });

  std::vector<double> data(4'000'000);
  kernels::serial::sample(f, -2.0, 1e-6, data);
  report("max_abs 4e6", repeats, [&](kernels::Exec e) { return std::vector<double>{kernels::max_abs(data, e)}; });

  const ScaledMollifier psi(build_mollifier(0.5), 0.0125);
  const auto eta = StructuredDistribution::from_density(Density::uniform(-0.5, 0.5));
  const GridSpec grid = grid_covering(support_of(eta), psi.support_half_width(), 1e-5);
  report("convolve uniform, h=1e-5", repeats, [&](kernels::Exec e) {
    const GridFunction g = convolve_mollifier(psi, eta, grid, e);
    std::vector<double> out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = g[i];
    return out;
  });

  FalsifyOptions o;
  o.budget = 10000;
  o.mode = Mode::two_sided;
  const auto mu = RadonMeasureSpec::uniform(-0.5, 0.5);
  const auto admissible = StructuredDistribution::derivative_of_delta(0.0, 5);
  report("falsify budget 1e4", repeats, [&](kernels::Exec e) {
    o.exec = e;
    const auto c = falsify(mu, admissible, o);
    return std::vector<double>{c ? c->value : 0.0};
  });
  return 0;
}

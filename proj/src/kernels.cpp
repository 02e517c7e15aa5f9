#include "wdm/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace wdm::kernels {

namespace {
std::atomic<Exec> g_exec{Exec::parallel};

// Composite Simpson of kernel(x - y) * density(y) over y in [lo, hi].
double simpson_product(const Fn1& kernel, const Fn1& density, double x, double lo, double hi, int panels) {
  if (!(hi > lo)) return 0.0;
  const int n = panels + (panels % 2);
  const double h = (hi - lo) / n;
  double acc = kernel(x - lo) * density(lo) + kernel(x - hi) * density(hi);
  for (int j = 1; j < n; ++j) {
    const double y = lo + j * h;
    acc += (j % 2 ? 4.0 : 2.0) * kernel(x - y) * density(y);
  }
  return acc * h / 3.0;
}

// Simpson weights times kernel values at the offsets d_j = w - j h of an
// unclipped window, shared by every output point whose window lies in [a, b].
struct KernelTable {
  KernelTable(const Fn1& kernel, double half_width, int panels) : w(half_width) {
    n = panels + (panels % 2);
    step = 2.0 * w / n;
    weighted.resize(static_cast<std::size_t>(n) + 1);
    for (int j = 0; j <= n; ++j) {
      const double c = (j == 0 || j == n) ? 1.0 : (j % 2 ? 4.0 : 2.0);
      weighted[static_cast<std::size_t>(j)] = c * kernel(w - j * step);
    }
  }
  double w;
  int n;
  double step;
  std::vector<double> weighted;
};

double convolve_at(const Fn1& kernel, const KernelTable& table, const Fn1& density, double a, double b, double x,
                   int panels) {
  const double lo = std::max(a, x - table.w);
  const double hi = std::min(b, x + table.w);
  if (lo == x - table.w && hi == x + table.w) {
    double acc = 0.0;
    for (int j = 0; j <= table.n; ++j) acc += table.weighted[static_cast<std::size_t>(j)] * density(x - table.w + j * table.step);
    return acc * table.step / 3.0;
  }
  return simpson_product(kernel, density, x, lo, hi, panels);
}

// Exceptions must not escape an OpenMP region; the first one is kept and
// rethrown after the loop.
class ExceptionSlot {
public:
  template <class Body>
  void run(Body&& body) {
    try {
      body();
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu_);
      if (!first_) first_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (first_) std::rethrow_exception(first_);
  }

private:
  std::mutex mu_;
  std::exception_ptr first_;
};
}  // namespace

Exec default_exec() { return g_exec.load(); }
void set_default_exec(Exec e) { g_exec.store(e); }

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_thread_count(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

namespace serial {

void sample(const Fn1& f, double lo, double h, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(lo + static_cast<double>(i) * h);
}

void evaluate(const std::function<double(std::size_t)>& f, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(i);
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

void convolve_piece(const Fn1& kernel, double half_width, const Fn1& density, double a, double b, double lo,
                    double h, int panels, std::span<double> out) {
  const KernelTable table(kernel, half_width, panels);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] += convolve_at(kernel, table, density, a, b, lo + static_cast<double>(i) * h, panels);
}

}  // namespace serial

namespace omp {

void sample(const Fn1& f, double lo, double h, std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(out.size());
  ExceptionSlot slot;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    slot.run([&] { out[static_cast<std::size_t>(i)] = f(lo + static_cast<double>(i) * h); });
  slot.rethrow();
}

void evaluate(const std::function<double(std::size_t)>& f, std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(out.size());
  ExceptionSlot slot;
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    slot.run([&] { out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i)); });
  slot.rethrow();
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  const auto n = static_cast<std::ptrdiff_t>(v.size());
#pragma omp parallel for reduction(max : m) schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) m = std::max(m, std::abs(v[static_cast<std::size_t>(i)]));
  return m;
}

void convolve_piece(const Fn1& kernel, double half_width, const Fn1& density, double a, double b, double lo,
                    double h, int panels, std::span<double> out) {
  const KernelTable table(kernel, half_width, panels);
  const auto n = static_cast<std::ptrdiff_t>(out.size());
  ExceptionSlot slot;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    slot.run([&] {
      out[static_cast<std::size_t>(i)] +=
          convolve_at(kernel, table, density, a, b, lo + static_cast<double>(i) * h, panels);
    });
  slot.rethrow();
}

}  // namespace omp

}  // namespace wdm::kernels

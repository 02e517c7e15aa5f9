#pragma once

// Data-parallel inner loops shared by the numeric modules.
//
// Every kernel exists twice: `serial::` is the reference implementation kept
// for testing, `omp::` is the OpenMP version used by default. Both compute each
// output element independently with identical arithmetic, so their results are
// bitwise equal regardless of thread count.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace wdm::kernels {

enum class Exec { serial, parallel };

// Default execution policy; `parallel` unless changed by set_default_exec.
Exec default_exec();
void set_default_exec(Exec e);

using Fn1 = std::function<double(double)>;

namespace serial {
// out[i] = f(lo + i*h)
void sample(const Fn1& f, double lo, double h, std::span<double> out);
// out[i] = f(i)
void evaluate(const std::function<double(std::size_t)>& f, std::span<double> out);
double max_abs(std::span<const double> v);
// out[i] += ∫_{[x_i - half_width, x_i + half_width] ∩ [a,b]} kernel(x_i - y) density(y) dy
void convolve_piece(const Fn1& kernel, double half_width, const Fn1& density, double a, double b,
                    double lo, double h, int panels, std::span<double> out);
}  // namespace serial

namespace omp {
void sample(const Fn1& f, double lo, double h, std::span<double> out);
void evaluate(const std::function<double(std::size_t)>& f, std::span<double> out);
double max_abs(std::span<const double> v);
void convolve_piece(const Fn1& kernel, double half_width, const Fn1& density, double a, double b,
                    double lo, double h, int panels, std::span<double> out);
}  // namespace omp

inline void sample(const Fn1& f, double lo, double h, std::span<double> out, Exec e = default_exec()) {
  e == Exec::serial ? serial::sample(f, lo, h, out) : omp::sample(f, lo, h, out);
}
inline void evaluate(const std::function<double(std::size_t)>& f, std::span<double> out,
                     Exec e = default_exec()) {
  e == Exec::serial ? serial::evaluate(f, out) : omp::evaluate(f, out);
}
inline double max_abs(std::span<const double> v, Exec e = default_exec()) {
  return e == Exec::serial ? serial::max_abs(v) : omp::max_abs(v);
}
inline void convolve_piece(const Fn1& kernel, double half_width, const Fn1& density, double a, double b,
                           double lo, double h, int panels, std::span<double> out,
                           Exec e = default_exec()) {
  e == Exec::serial ? serial::convolve_piece(kernel, half_width, density, a, b, lo, h, panels, out)
                    : omp::convolve_piece(kernel, half_width, density, a, b, lo, h, panels, out);
}

// Number of OpenMP threads (1 when built without OpenMP).
int thread_count();
void set_thread_count(int n);

}  // namespace wdm::kernels

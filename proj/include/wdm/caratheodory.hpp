#pragma once

// Positive measures on the circle through their Fourier coefficients
// a_n = ∫ e^{-inθ} dμ(θ): Toeplitz positivity, and the tangent condition on the
// derivative coefficients restricted to the kernel of the Toeplitz form.
//
// Objects live on [0, 2π) with θ as the real coordinate. Finite truncation N
// means a violated condition is conclusive while a satisfied one only holds
// "up to frequency N".

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <vector>

#include "wdm/distributions.hpp"
#include "wdm/families.hpp"

namespace wdm {

using cplx = std::complex<double>;

class PreconditionError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

// Coefficients a_n for |n| <= N.
class FourierData {
public:
  FourierData() = default;
  // values[j] = a_{j - N}, j = 0..2N
  FourierData(int N, std::vector<cplx> values);
  // From a_0..a_N, completing a_{-n} = conj(a_n).
  static FourierData hermitian_from_nonnegative(const std::vector<cplx>& a);

  int max_frequency() const { return n_; }
  cplx operator[](int n) const;
  bool is_hermitian(double tol = 1e-12) const;
  // Restriction to |n| <= N.
  FourierData truncated(int N) const;

private:
  int n_ = 0;
  std::vector<cplx> values_;
};

// a_n = <η, e^{-inθ}>: atoms c ∂^k δ_θ0 in closed form c (in)^k e^{-inθ0},
// densities by quadrature.
FourierData fourier_coefficients(const StructuredDistribution& eta, int N, int panels = 8192);
FourierData fourier_coefficients(const RadonMeasureSpec& mu, int N, int panels = 8192);

// d/dt a_n(μ_t) at t = 0+ for each |n| <= N, by one-sided Richardson
// extrapolation of ∫cos(nθ) dμ_t and ∫sin(nθ) dμ_t.
FourierData fourier_derivative(const MeasureFamily& family, int N);

// T[m, n] = a_{m-n}, 0 <= m, n <= N.
Eigen::MatrixXcd toeplitz_matrix(const FourierData& data, int N);

struct PsdResult {
  bool is_psd = false;
  double min_eigenvalue = 0.0;
  double norm = 0.0;  // spectral norm
};

// Threshold min eigenvalue >= -1e-10 ‖T‖. Throws DomainError on non-Hermitian
// data.
PsdResult toeplitz_psd(const FourierData& data);
PsdResult toeplitz_psd(const FourierData& data, int N);

struct TangentResult {
  bool satisfied = true;
  int N = 0;
  int kernel_dimension = 0;
  // Extreme eigenvalues of Q^H T1 Q with Q an orthonormal basis of ker T0
  // (zero when the kernel is trivial).
  double min_projected_eigenvalue = 0.0;
  double projected_norm = 0.0;
};

// Σ a'_{m-n} λ_m conj(λ_n) >= 0 on the kernel of Σ a_{m-n} λ_m conj(λ_n).
// Throws PreconditionError when T0 is not PSD, DomainError on non-Hermitian
// data.
TangentResult tangent_condition(const FourierData& a0, const FourierData& a1, int N);

}  // namespace wdm

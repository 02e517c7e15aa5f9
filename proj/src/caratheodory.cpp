#include "wdm/caratheodory.hpp"

#include <cmath>
#include <sstream>

namespace wdm {

namespace {

constexpr double kSpectralTol = 1e-10;

void require_hermitian(const FourierData& d) {
  if (!d.is_hermitian()) throw DomainError("Fourier data is not Hermitian (a_-n != conj(a_n))");
}

// Eigenvalues of a Hermitian matrix, ascending.
Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

}  // namespace

FourierData::FourierData(int N, std::vector<cplx> values) : n_(N), values_(std::move(values)) {
  if (N < 0 || values_.size() != static_cast<std::size_t>(2 * N + 1))
    throw std::invalid_argument("Fourier data needs 2N + 1 coefficients");
}

FourierData FourierData::hermitian_from_nonnegative(const std::vector<cplx>& a) {
  if (a.empty()) throw std::invalid_argument("need at least a_0");
  const int N = static_cast<int>(a.size()) - 1;
  std::vector<cplx> v(static_cast<std::size_t>(2 * N + 1));
  for (int n = 0; n <= N; ++n) {
    v[static_cast<std::size_t>(N + n)] = a[static_cast<std::size_t>(n)];
    v[static_cast<std::size_t>(N - n)] = std::conj(a[static_cast<std::size_t>(n)]);
  }
  v[static_cast<std::size_t>(N)] = a[0];
  return FourierData(N, std::move(v));
}

cplx FourierData::operator[](int n) const {
  if (std::abs(n) > n_) throw std::out_of_range("frequency beyond the stored range");
  return values_[static_cast<std::size_t>(n + n_)];
}

bool FourierData::is_hermitian(double tol) const {
  double scale = 0.0;
  for (const auto& z : values_) scale = std::max(scale, std::abs(z));
  for (int n = 0; n <= n_; ++n)
    if (std::abs((*this)[-n] - std::conj((*this)[n])) > tol * std::max(scale, 1.0)) return false;
  return true;
}

FourierData FourierData::truncated(int N) const {
  if (N > n_ || N < 0) throw std::out_of_range("cannot truncate beyond the stored range");
  std::vector<cplx> v;
  for (int n = -N; n <= N; ++n) v.push_back((*this)[n]);
  return FourierData(N, std::move(v));
}

FourierData fourier_coefficients(const StructuredDistribution& eta, int N, int panels) {
  if (N < 0) throw std::invalid_argument("N must be >= 0");
  std::vector<cplx> v;
  for (int n = -N; n <= N; ++n) {
    cplx acc = 0.0;
    const cplx in(0.0, static_cast<double>(n));
    for (const auto& a : eta.atoms()) {
      cplx power = 1.0;
      for (int j = 0; j < a.order; ++j) power *= in;
      acc += a.coeff * power * std::exp(-in * a.location);
    }
    const double nn = n;
    const auto c = SmoothFunction::generic([nn](auto x) { using std::cos; return cos(nn * x); }, "cos");
    const auto s = SmoothFunction::generic([nn](auto x) { using std::sin; return sin(nn * x); }, "sin");
    acc += cplx(eta.density().integrate_against(c, panels), -eta.density().integrate_against(s, panels));
    v.push_back(acc);
  }
  return FourierData(N, std::move(v));
}

FourierData fourier_coefficients(const RadonMeasureSpec& mu, int N, int panels) {
  return fourier_coefficients(mu.as_distribution(), N, panels);
}

FourierData fourier_derivative(const MeasureFamily& family, int N) {
  if (N < 0) throw std::invalid_argument("N must be >= 0");
  std::vector<SmoothFunction> battery;
  for (int n = 0; n <= N; ++n) {
    const double nn = n;
    battery.push_back(SmoothFunction::generic([nn](auto x) { using std::cos; return cos(nn * x); }, "cos"));
    battery.push_back(SmoothFunction::generic([nn](auto x) { using std::sin; return sin(nn * x); }, "sin"));
  }
  const auto rows = verify_weak_derivative(family, battery);
  std::vector<cplx> a;
  for (int n = 0; n <= N; ++n) {
    const auto j = static_cast<std::size_t>(2 * n);
    a.emplace_back(rows[j].estimate, -rows[j + 1].estimate);
  }
  return FourierData::hermitian_from_nonnegative(a);
}

Eigen::MatrixXcd toeplitz_matrix(const FourierData& data, int N) {
  if (N > data.max_frequency()) throw std::out_of_range("Toeplitz size exceeds the available coefficients");
  Eigen::MatrixXcd T(N + 1, N + 1);
  for (int m = 0; m <= N; ++m)
    for (int n = 0; n <= N; ++n) T(m, n) = data[m - n];
  return T;
}

PsdResult toeplitz_psd(const FourierData& data) { return toeplitz_psd(data, data.max_frequency()); }

PsdResult toeplitz_psd(const FourierData& data, int N) {
  require_hermitian(data);
  const auto ev = hermitian_eigenvalues(toeplitz_matrix(data, N));
  PsdResult r;
  r.min_eigenvalue = ev.minCoeff();
  r.norm = ev.cwiseAbs().maxCoeff();
  r.is_psd = r.min_eigenvalue >= -kSpectralTol * r.norm;
  return r;
}

TangentResult tangent_condition(const FourierData& a0, const FourierData& a1, int N) {
  require_hermitian(a0);
  require_hermitian(a1);
  const Eigen::MatrixXcd T0 = toeplitz_matrix(a0, N);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(T0);
  const Eigen::VectorXd ev = es.eigenvalues();
  const double norm0 = ev.cwiseAbs().maxCoeff();
  if (ev.minCoeff() < -kSpectralTol * norm0) {
    std::ostringstream os;
    os << "Toeplitz matrix of the base measure is not PSD (min eigenvalue " << ev.minCoeff() << ")";
    throw PreconditionError(os.str());
  }
  TangentResult r;
  r.N = N;
  std::vector<Eigen::Index> kernel;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev[i] <= kSpectralTol * norm0) kernel.push_back(i);
  r.kernel_dimension = static_cast<int>(kernel.size());
  if (kernel.empty()) return r;

  Eigen::MatrixXcd Q(T0.rows(), static_cast<Eigen::Index>(kernel.size()));
  for (std::size_t j = 0; j < kernel.size(); ++j) Q.col(static_cast<Eigen::Index>(j)) = es.eigenvectors().col(kernel[j]);
  const Eigen::MatrixXcd T1 = toeplitz_matrix(a1, N);
  Eigen::MatrixXcd P = Q.adjoint() * T1 * Q;
  P = 0.5 * (P + P.adjoint());  // remove rounding asymmetry
  const auto pe = hermitian_eigenvalues(P);
  r.min_projected_eigenvalue = pe.minCoeff();
  r.projected_norm = pe.cwiseAbs().maxCoeff();
  const double norm1 = hermitian_eigenvalues(T1).cwiseAbs().maxCoeff();
  r.satisfied = r.min_projected_eigenvalue >= -kSpectralTol * std::max(norm1, 1.0);
  return r;
}

}  // namespace wdm

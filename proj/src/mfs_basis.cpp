#include "mfsplateau/mfs_basis.hpp"

#include <algorithm>
#include <string>

#include "mfsplateau/circulant.hpp"

namespace mfsplateau {

namespace {

constexpr double kMinSpectrum = 1e-14;
constexpr double kImagResidueTol = 1e-10;

}  // namespace

double fundamental_solution(Complex z) { return std::log(std::abs(z)) / kTwoPi; }

MfsBasis::MfsBasis(int n, double radius) : n_(n), radius_(radius) {
  if (n < 4) throw ConfigError("basis size must be at least 4, got " + std::to_string(n));
  if (!(radius > 1.0) || !std::isfinite(radius)) throw ConfigError("radius must exceed 1");

  omega_ = std::polar(1.0, kTwoPi / n);
  const auto size = static_cast<std::size_t>(n);
  twiddle_.resize(size);
  collocation_.resize(size);
  singular_.resize(size);
  // polar() per index rather than repeated multiplication keeps |z_j| = 1 to
  // roundoff. The table is exactly conjugate-symmetric (w^{N-k} = conj(w^k)),
  // with the axis points exact, so real data transforms to exactly Hermitian
  // spectra.
  for (std::size_t k = 0; 2 * k <= size; ++k) {
    Complex w = std::polar(1.0, kTwoPi * static_cast<double>(k) / n);
    if (4 * k == size) w = {0.0, 1.0};
    if (2 * k == size) w = {-1.0, 0.0};
    twiddle_[k] = w;
    twiddle_[(size - k) % size] = std::conj(w);
  }
  twiddle_[0] = {1.0, 0.0};
  if (size % 4 == 0) twiddle_[3 * size / 4] = {0.0, -1.0};
  for (std::size_t k = 0; k < size; ++k) {
    collocation_[k] = twiddle_[k];
    singular_[k] = radius * twiddle_[k];
  }

  // Summed in long double: the smallest eigenvalues are ~R^{-N/2} and lose
  // relative accuracy quickly in double.
  const auto spec = circulant_spectrum<long double>(n, static_cast<long double>(radius));
  spectrum_.assign(spec.eigenvalues.begin(), spec.eigenvalues.end());
  inverse_kernel_.assign(spec.inverse_kernel.begin(), spec.inverse_kernel.end());
}

double MfsBasis::inverse_entry(int k, int j) const {
  const int m = ((k - j) % n_ + n_) % n_;
  return inverse_kernel_[static_cast<std::size_t>(m)];
}

Coefficients MfsBasis::solve(std::span<const double> f) const {
  const auto size = static_cast<std::size_t>(n_);
  if (f.size() != size) {
    throw ConfigError("boundary values have length " + std::to_string(f.size()) + ", basis has " +
                      std::to_string(n_));
  }
  for (double lambda : spectrum_) {
    if (std::abs(lambda) < kMinSpectrum) {
      throw ConfigError("ill-posed basis: spectrum entry below 1e-14 (reduce n or radius)");
    }
  }

  // F_p = sum_j f_j w^{-jp};  Q_k = N^-1 sum_p w^{kp} F_p / lambda_p
  std::vector<Complex> scaled(size);
  for (std::size_t p = 0; p < size; ++p) {
    Complex acc{};
    for (std::size_t j = 0; j < size; ++j) acc += f[j] * std::conj(twiddle_[(j * p) % size]);
    scaled[p] = acc / spectrum_[p];
  }

  double f_max = 0.0;
  for (double v : f) f_max = std::max(f_max, std::abs(v));

  std::vector<double> q(size);
  double imag_max = 0.0;
  for (std::size_t k = 0; k < size; ++k) {
    // Modes p and N - p are summed together so their conjugate parts cancel
    // term by term; what remains in Im measures asymmetry of the spectrum.
    Complex acc = scaled[0];
    for (std::size_t p = 1; 2 * p < size; ++p) {
      acc += scaled[p] * twiddle_[(k * p) % size] + scaled[size - p] * twiddle_[(k * (size - p)) % size];
    }
    if (size % 2 == 0) acc += scaled[size / 2] * twiddle_[(k * (size / 2)) % size];
    acc /= static_cast<double>(n_);
    q[k] = acc.real();
    imag_max = std::max(imag_max, std::abs(acc.imag()));
    if (!std::isfinite(q[k])) throw NumericalError("non-finite MFS coefficient");
  }
  if (imag_max > kImagResidueTol * f_max) {
    throw NumericalError("inverse DFT left an imaginary residue of " + std::to_string(imag_max));
  }
  return Coefficients(std::move(q));
}

double MfsBasis::evaluate(const Coefficients& q, Complex z) const {
  double acc = 0.0;
  for (std::size_t k = 0; k < singular_.size(); ++k) acc += q[k] * std::log(std::norm(z - singular_[k]));
  return acc / (2.0 * kTwoPi);
}

Complex MfsBasis::evaluate_dz(const Coefficients& q, Complex z) const {
  Complex acc{};
  for (std::size_t k = 0; k < singular_.size(); ++k) acc += q[k] / (z - singular_[k]);
  return acc / (4.0 * kPi);
}

Complex MfsBasis::evaluate_dzz(const Coefficients& q, Complex z) const {
  Complex acc{};
  for (std::size_t k = 0; k < singular_.size(); ++k) {
    const Complex d = z - singular_[k];
    acc += q[k] / (d * d);
  }
  return -acc / (4.0 * kPi);
}

}  // namespace mfsplateau

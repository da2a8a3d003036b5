#pragma once

// Spectral data of the MFS collocation matrix on the unit disk.
//
// With z_j = w^j on the unit circle and zeta_k = R w^k (w = exp(2 pi i / N)),
// the collocation matrix G_jk = G(z_j - zeta_k) depends only on (k - j) mod N:
//
//   G_jk = g(k - j),   g(m) = (2 pi)^-1 log|1 - R w^m|,   g(-m) = g(m).
//
// It is a real symmetric circulant, diagonalized by the DFT with real
// eigenvalues lambda_p = sum_m w^{pm} g(m), and its inverse is the circulant
// with kernel c(m) = N^-1 sum_p w^{pm} / lambda_p.
//
// Templated on the scalar so the same formulas can be checked in extended
// precision; the solver itself uses double.

#include <cstddef>
#include <vector>

namespace mfsplateau {

template <class Real>
struct CirculantSpectrum {
  std::vector<Real> kernel;          ///< g(m), m = 0..N-1
  std::vector<Real> eigenvalues;     ///< lambda_p, p = 0..N-1
  std::vector<Real> inverse_kernel;  ///< c(m): (G^-1)_{kj} = c((k - j) mod N)
};

template <class Real>
CirculantSpectrum<Real> circulant_spectrum(int n, const Real& radius) {
  using std::acos;
  using std::cos;
  using std::log;
  const auto size = static_cast<std::size_t>(n);
  const Real pi = acos(Real(-1));
  const Real two_pi = pi + pi;

  std::vector<Real> cosines(size);
  for (std::size_t k = 0; k < size; ++k) cosines[k] = cos(two_pi * Real(static_cast<long>(k)) / Real(n));

  CirculantSpectrum<Real> out;
  out.kernel.resize(size);
  for (std::size_t m = 0; m < size; ++m) {
    // |1 - R w^m|^2 = 1 - 2 R cos(2 pi m / N) + R^2
    const Real sq = Real(1) - Real(2) * radius * cosines[m] + radius * radius;
    out.kernel[m] = log(sq) / (Real(2) * two_pi);
  }

  // Direct summation; the sine part cancels exactly because g is even.
  out.eigenvalues.assign(size, Real(0));
  for (std::size_t p = 0; p < size; ++p) {
    Real acc(0);
    for (std::size_t m = 0; m < size; ++m) acc += out.kernel[m] * cosines[(p * m) % size];
    out.eigenvalues[p] = acc;
  }
  // Enforce lambda_p = lambda_{N-p} bit-for-bit so real inputs stay real.
  for (std::size_t p = 1; p < size; ++p) {
    if (size - p < p) out.eigenvalues[p] = out.eigenvalues[size - p];
  }

  out.inverse_kernel.assign(size, Real(0));
  for (std::size_t m = 0; m < size; ++m) {
    Real acc(0);
    for (std::size_t p = 0; p < size; ++p) acc += cosines[(p * m) % size] / out.eigenvalues[p];
    out.inverse_kernel[m] = acc / Real(n);
  }
  return out;
}

}  // namespace mfsplateau

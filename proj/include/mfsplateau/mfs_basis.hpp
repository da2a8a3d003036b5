#pragma once

#include <span>
#include <vector>

#include "mfsplateau/types.hpp"

namespace mfsplateau {

/// Fundamental solution of the Laplacian in the plane, G(z) = (2 pi)^-1 log|z|.
double fundamental_solution(Complex z);

/// MFS charges Q_k, one per singular point.
class Coefficients {
 public:
  Coefficients() = default;
  explicit Coefficients(std::vector<double> q) : q_(std::move(q)) {}

  static Coefficients unit(int n, int m) {
    std::vector<double> q(static_cast<std::size_t>(n), 0.0);
    q.at(static_cast<std::size_t>(m)) = 1.0;
    return Coefficients(std::move(q));
  }

  std::size_t size() const noexcept { return q_.size(); }
  double operator[](std::size_t k) const { return q_[k]; }
  std::span<const double> values() const noexcept { return q_; }

 private:
  std::vector<double> q_;
};

/// Collocation points z_j = w^j on the unit circle, singular points
/// zeta_k = R w^k outside it, and the circulant spectrum of the collocation
/// matrix. Immutable after construction.
class MfsBasis {
 public:
  /// Throws ConfigError if n < 4 or radius <= 1.
  MfsBasis(int n, double radius);

  int size() const noexcept { return n_; }
  double radius() const noexcept { return radius_; }
  Complex omega() const noexcept { return omega_; }

  std::span<const Complex> collocation() const noexcept { return collocation_; }
  std::span<const Complex> singular() const noexcept { return singular_; }
  /// Real eigenvalues of the collocation matrix, indexed by DFT mode p.
  std::span<const double> spectrum() const noexcept { return spectrum_; }
  /// First column of G^-1; (G^-1)_{kj} = inverse_kernel()[(k - j) mod n].
  std::span<const double> inverse_kernel() const noexcept { return inverse_kernel_; }
  double inverse_entry(int k, int j) const;

  /// Solves the collocation equations G Q = f through the DFT:
  /// transform f, divide by the spectrum, transform back.
  /// Throws ConfigError on a length mismatch or when a spectrum entry is
  /// below 1e-14 in magnitude (ill-posed basis).
  Coefficients solve(std::span<const double> boundary_values) const;

  /// u(z) = sum_k Q_k G(z - zeta_k).
  double evaluate(const Coefficients& q, Complex z) const;

  /// Wirtinger derivative du/dz. From G = (4 pi)^-1 log(z conj(z)),
  /// dG/dz = 1 / (4 pi z).
  Complex evaluate_dz(const Coefficients& q, Complex z) const;

  /// d^2u/dz^2 = -sum_k Q_k / (4 pi (z - zeta_k)^2).
  /// For harmonic u: Re(4 u_zz) = 2 u_11 and Im(4 u_zz) = -2 u_12.
  Complex evaluate_dzz(const Coefficients& q, Complex z) const;

 private:
  int n_;
  double radius_;
  Complex omega_;
  std::vector<Complex> collocation_;
  std::vector<Complex> singular_;
  std::vector<double> spectrum_;
  std::vector<double> inverse_kernel_;
  std::vector<Complex> twiddle_;  // w^k, k = 0..n-1
};

}  // namespace mfsplateau

#pragma once

#include <array>
#include <span>
#include <vector>

#include "mfsplateau/curves.hpp"
#include "mfsplateau/mfs_basis.hpp"
#include "mfsplateau/types.hpp"

namespace mfsplateau {

/// Boundary parameter angles phi_j, a point of the N-torus. Angles are kept
/// as given (unwrapped); reduced() maps them to [0, 2*pi).
class Configuration {
 public:
  Configuration() = default;
  explicit Configuration(std::vector<double> angles) : angles_(std::move(angles)) {}

  /// phi_j = 2 pi j / n + offset.
  static Configuration equidistant(int n, double offset = 0.0);

  std::size_t size() const noexcept { return angles_.size(); }
  std::span<const double> angles() const noexcept { return angles_; }
  std::vector<double> reduced() const;

  /// True when the cyclic order is strictly increasing and winds once around
  /// the circle, i.e. the configuration samples an orientation-preserving
  /// homeomorphism of the circle.
  bool monotone() const;

 private:
  std::vector<double> angles_;
};

/// X^(N)(z) = (X_1, X_2, X_3), each coordinate an MFS harmonic function on
/// the closed disk.
class ApproximateSurface {
 public:
  ApproximateSurface(MfsBasis basis, std::array<Coefficients, 3> coefficients, CurveDescriptor curve,
                     Configuration config);

  const MfsBasis& basis() const noexcept { return basis_; }
  const Coefficients& coefficients(int i) const { return coefficients_.at(static_cast<std::size_t>(i)); }
  const CurveDescriptor& curve() const noexcept { return curve_; }
  const Configuration& configuration() const noexcept { return config_; }

  Vec3 position(Complex z) const;
  /// Wirtinger derivatives dX_i/dz.
  std::array<Complex, 3> dz(Complex z) const;
  std::array<Complex, 3> dzz(Complex z) const;

 private:
  MfsBasis basis_;
  std::array<Coefficients, 3> coefficients_;
  CurveDescriptor curve_;
  Configuration config_;
};

struct FundamentalForms {
  double g11 = 0.0;
  double g12 = 0.0;
  double g22 = 0.0;
  double h11 = 0.0;
  double h12 = 0.0;
  double h22 = 0.0;
  Vec3 normal{0.0, 0.0, 0.0};

  double det_g() const { return g11 * g22 - g12 * g12; }
};

/// Radial Gauss-Legendre order and angular trapezoid count.
struct QuadratureSpec {
  int n_r = 64;
  int n_theta = 256;
};

struct SurfaceMesh {
  std::vector<Vec3> vertices;
  std::vector<std::vector<std::size_t>> faces;  // 0-based; triangles at the center, quads elsewhere
  std::vector<double> abs_dilatation;
  std::vector<double> mean_curvature;  // NaN where the tangent plane degenerates
};

/// Solves the three collocation problems X_i(z_j) = b_i(phi_j).
/// Throws ConfigError on a size mismatch; a non-monotone configuration is
/// accepted (see Configuration::monotone()).
ApproximateSurface build_surface(const MfsBasis& basis, const BoundaryCurve& curve, const Configuration& config);

/// Complex dilatation Phi(z) = sum_i (dX_i/dz)^2; zero iff X is conformal at z.
Complex dilatation(const ApproximateSurface& surface, Complex z);

/// max |Phi| over m equispaced samples of |z| = rho.
double dilatation_sup(const ApproximateSurface& surface, double rho, int samples);

/// max |Phi| over the center and n_r circles of radius radius*k/n_r, n_theta samples each.
double dilatation_sup_disk(const ApproximateSurface& surface, double radius, int n_r, int n_theta);

/// D(X) = 1/2 int_B |d1 X|^2 + |d2 X|^2 = 2 int_B sum_i |dX_i/dz|^2.
/// Throws ConfigError if n_r < 2 or n_theta < 4.
double dirichlet_energy(const ApproximateSurface& surface, const QuadratureSpec& quad = {});

/// Throws NumericalError("degenerate tangent plane") when |d1 X x d2 X| < 1e-12.
FundamentalForms fundamental_forms(const ApproximateSurface& surface, Complex z);

/// H = (g11 h22 + g22 h11 - 2 g12 h12) / (2 det g).
double mean_curvature(const ApproximateSurface& surface, Complex z);

/// max |H| over the same disk samples as dilatation_sup_disk; degenerate
/// points are skipped. Returns NaN if every sample is degenerate.
double mean_curvature_sup_disk(const ApproximateSurface& surface, double radius, int n_r, int n_theta);

/// Polar tensor mesh: a center vertex plus n_r rings (radius k/n_r) of n_theta
/// vertices each.
SurfaceMesh sample_mesh(const ApproximateSurface& surface, int n_r, int n_theta);

/// Gauss-Legendre nodes and weights on (0, 1).
void gauss_legendre_unit(int order, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace mfsplateau

#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mfsplateau/curves.hpp"
#include "mfsplateau/mfs_basis.hpp"
#include "mfsplateau/surface.hpp"

namespace mfsplateau {

struct OptimizerSettings {
  double eta = 1e-2;
  int max_iters = 10000;
  double rho = 0.87;
  double grad_tolerance = 0.0;  // stop once max|grad E| <= this; 0 never stops early
  int energy_log_stride = 100;
  bool adaptive_step = false;   // halve eta when E blows up instead of aborting

  /// Throws ConfigError for eta outside (0, 1), rho outside (0, 1),
  /// max_iters < 0, negative tolerance or stride < 1.
  void validate() const;
};

/// Where and how finely the post-run diagnostics are sampled.
struct DiagnosticsSpec {
  double interior_radius = 0.5;
  int n_r = 20;
  int n_theta = 256;
  QuadratureSpec quadrature{};
  int fingerprint_samples = 16;
};

struct OptimizerState {
  Configuration phi;        // current point (where the gradient is taken)
  Configuration lookahead;  // previous gradient-step iterate
  int iter = 0;
  double last_energy = 0.0;
  double last_grad_norm = 0.0;
};

struct SolveReport {
  Configuration initial_config;
  Configuration final_config;
  double final_energy = 0.0;
  double dilatation_sup_interior = 0.0;  // max |Phi| on |z| <= interior_radius
  double dilatation_sup_rho = 0.0;       // max |Phi| on |z| = rho
  double dirichlet_energy = 0.0;
  double mean_curvature_sup = 0.0;       // max |H| on |z| <= interior_radius
  int iters_run = 0;
  double eta_final = 0.0;
  std::string stop_reason;
  std::vector<std::pair<int, double>> energy_trace;
  std::vector<double> fingerprint;  // sorted pairwise distances of fixed parameter samples
  double wall_time = 0.0;
  bool monotone = false;
};

/// E(phi) = sum_j |Phi(rho z_j; phi)|^2, computed by building the surface and
/// evaluating the dilatation at the N points rho z_j.
double energy(const MfsBasis& basis, const BoundaryCurve& curve, const Configuration& config, double rho);

/// Analytic gradient of energy() with respect to the angles.
/// Throws ConfigError if the curve has no derivative data.
std::vector<double> gradient(const MfsBasis& basis, const BoundaryCurve& curve, const Configuration& config,
                             double rho);

/// Precomputed linear map from boundary samples to dX/dz at the points
/// rho z_l, used by the optimizer's inner loop.
///
/// S_lj = d(dX/dz)(rho z_l) / d f_j is built mode by mode:
///   dX/dz(w) = -1 / (4 pi (1 - (w/R)^N)) * sum_{q=1..N} w^{q-1} R^{-q} f~_q / lambda_q,
/// which keeps every term bounded; forming D * G^-1 as a dense product would
/// cancel entries as large as 1 / min|lambda|.
class EnergyModel {
 public:
  EnergyModel(const MfsBasis& basis, double rho);

  int size() const noexcept { return static_cast<int>(sample_map_.rows()); }
  double rho() const noexcept { return rho_; }
  const Eigen::MatrixXcd& sample_map() const noexcept { return sample_map_; }

  double energy(const BoundaryCurve& curve, std::span<const double> angles) const;
  /// Returns E and writes dE/dphi_j into grad (length N).
  double energy_and_gradient(const BoundaryCurve& curve, std::span<const double> angles,
                             std::span<double> grad) const;

 private:
  double rho_;
  Eigen::MatrixXcd sample_map_;
};

/// Accelerated gradient descent on E:
///   psi_{n+1} = phi_n - eta grad E(phi_n)
///   phi_{n+1} = psi_{n+1} + (n - 1)/(n + 2) (psi_{n+1} - psi_n),   psi_1 = phi_1.
/// Angles stay unwrapped during the run. Throws NumericalError if E becomes
/// non-finite (and adaptive_step is off or eta underflows).
SolveReport nesterov_run(const MfsBasis& basis, const BoundaryCurve& curve, const Configuration& initial,
                         const OptimizerSettings& settings, const DiagnosticsSpec& diagnostics = {});

/// Fills every diagnostic field of a report for the given final configuration.
void diagnose(SolveReport& report, const MfsBasis& basis, const BoundaryCurve& curve, double rho,
              const DiagnosticsSpec& diagnostics);

/// Rigid-motion-invariant shape signature: sorted pairwise distances between
/// X at a fixed, rotation-asymmetric set of parameter points.
std::vector<double> shape_fingerprint(const ApproximateSurface& surface, int samples);

}  // namespace mfsplateau

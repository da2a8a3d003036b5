#include "mfsplateau/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

namespace mfsplateau {

void OptimizerSettings::validate() const {
  if (!(eta > 0.0 && eta < 1.0)) throw ConfigError("step size eta must lie in (0, 1)");
  if (!(rho > 0.0 && rho < 1.0)) throw ConfigError("rho must lie in (0, 1)");
  if (max_iters < 0) throw ConfigError("max_iters must be non-negative");
  if (!(grad_tolerance >= 0.0)) throw ConfigError("grad_tolerance must be non-negative");
  if (energy_log_stride < 1) throw ConfigError("energy_log_stride must be positive");
}

double energy(const MfsBasis& basis, const BoundaryCurve& curve, const Configuration& config, double rho) {
  if (!(rho > 0.0 && rho < 1.0)) throw ConfigError("rho must lie in (0, 1)");
  const auto surface = build_surface(basis, curve, config);
  double total = 0.0;
  for (const Complex z : basis.collocation()) total += std::norm(dilatation(surface, rho * z));
  return total;
}

std::vector<double> gradient(const MfsBasis& basis, const BoundaryCurve& curve, const Configuration& config,
                             double rho) {
  if (!curve.has_derivative()) throw ConfigError("gradient requires a curve with derivative data");
  if (config.size() != static_cast<std::size_t>(basis.size())) {
    throw ConfigError("configuration size does not match the basis");
  }
  const EnergyModel model(basis, rho);
  std::vector<double> grad(config.size());
  model.energy_and_gradient(curve, config.angles(), grad);
  return grad;
}

EnergyModel::EnergyModel(const MfsBasis& basis, double rho) : rho_(rho) {
  if (!(rho > 0.0 && rho < 1.0)) throw ConfigError("rho must lie in (0, 1)");
  const int n = basis.size();
  const double radius = basis.radius();
  const auto spectrum = basis.spectrum();
  for (double lambda : spectrum) {
    if (std::abs(lambda) < 1e-14) throw ConfigError("ill-posed basis: spectrum entry below 1e-14 (reduce n or radius)");
  }
  const auto nn = static_cast<std::size_t>(n);
  std::vector<Complex> roots(nn);
  for (std::size_t k = 0; k < nn; ++k) roots[k] = std::polar(1.0, -kTwoPi * static_cast<double>(k) / n);

  sample_map_.resize(n, n);
  std::vector<Complex> mode(nn);
  for (int l = 0; l < n; ++l) {
    const Complex w = std::polar(rho, kTwoPi * l / n);
    const Complex ratio = w / radius;
    // mode[q-1] = w^{q-1} R^{-q} / lambda_{q mod N}, q = 1..N
    Complex power = 1.0 / radius;
    for (std::size_t q = 1; q <= nn; ++q) {
      mode[q - 1] = power / spectrum[q % nn];
      power *= ratio;
    }
    // power now holds (w/R)^N / R
    const Complex prefactor = -1.0 / (4.0 * kPi * (1.0 - power * radius));
    for (std::size_t j = 0; j < nn; ++j) {
      Complex acc{};
      for (std::size_t q = 1; q <= nn; ++q) acc += mode[q - 1] * roots[(j * q) % nn];
      sample_map_(l, static_cast<Eigen::Index>(j)) = prefactor * acc;
    }
  }
}

namespace {

void boundary_samples(const BoundaryCurve& curve, std::span<const double> angles, Eigen::MatrixXd& values,
                      Eigen::MatrixXd* derivs) {
  const auto n = static_cast<Eigen::Index>(angles.size());
  values.resize(n, 3);
  if (derivs != nullptr) derivs->resize(n, 3);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double t = angles[static_cast<std::size_t>(j)];
    const Vec3 b = curve(t);
    values.row(j) << b[0], b[1], b[2];
    if (derivs != nullptr) {
      const Vec3 db = curve.derivative(t);
      derivs->row(j) << db[0], db[1], db[2];
    }
  }
}

}  // namespace

double EnergyModel::energy(const BoundaryCurve& curve, std::span<const double> angles) const {
  if (static_cast<Eigen::Index>(angles.size()) != sample_map_.cols()) {
    throw ConfigError("configuration size does not match the energy model");
  }
  Eigen::MatrixXd values;
  boundary_samples(curve, angles, values, nullptr);
  const Eigen::MatrixXcd w = sample_map_ * values.cast<Complex>();
  const Eigen::VectorXcd phi = w.array().square().rowwise().sum();
  return phi.squaredNorm();
}

double EnergyModel::energy_and_gradient(const BoundaryCurve& curve, std::span<const double> angles,
                                        std::span<double> grad) const {
  if (static_cast<Eigen::Index>(angles.size()) != sample_map_.cols() || grad.size() != angles.size()) {
    throw ConfigError("configuration size does not match the energy model");
  }
  Eigen::MatrixXd values;
  Eigen::MatrixXd derivs;
  boundary_samples(curve, angles, values, &derivs);

  // W_li = dX_i/dz(rho z_l), Phi_l = sum_i W_li^2
  const Eigen::MatrixXcd w = sample_map_ * values.cast<Complex>();
  const Eigen::VectorXcd phi = w.array().square().rowwise().sum();
  const double e = phi.squaredNorm();

  // dE/dphi_j = 2 sum_l Re(dPhi_l/dphi_j conj(Phi_l)),
  // dPhi_l/dphi_j = 2 sum_i W_li S_lj b_i'(phi_j)
  //   => dE/dphi_j = 4 sum_i b_i'(phi_j) Re((S^T U)_ji),  U_li = W_li conj(Phi_l)
  const Eigen::MatrixXcd u = w.array().colwise() * phi.conjugate().array();
  const Eigen::MatrixXcd v = sample_map_.transpose() * u;
  const Eigen::VectorXd g = 4.0 * (derivs.array() * v.real().array()).rowwise().sum();
  for (std::size_t j = 0; j < grad.size(); ++j) grad[j] = g(static_cast<Eigen::Index>(j));
  return e;
}

std::vector<double> shape_fingerprint(const ApproximateSurface& surface, int samples) {
  // Golden-angle spiral: no rotational symmetry, so parametrizations that
  // differ by a disk rotation produce different signatures.
  std::vector<Vec3> points;
  points.reserve(static_cast<std::size_t>(samples));
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int k = 0; k < samples; ++k) {
    const double r = 0.2 + 0.6 * (k + 0.5) / samples;
    points.push_back(surface.position(std::polar(r, golden * k)));
  }
  std::vector<double> dist;
  for (std::size_t a = 0; a < points.size(); ++a) {
    for (std::size_t b = a + 1; b < points.size(); ++b) dist.push_back(norm(points[a] - points[b]));
  }
  std::sort(dist.begin(), dist.end());
  return dist;
}

void diagnose(SolveReport& report, const MfsBasis& basis, const BoundaryCurve& curve, double rho,
              const DiagnosticsSpec& diagnostics) {
  const auto surface = build_surface(basis, curve, report.final_config);
  report.final_energy = energy(basis, curve, report.final_config, rho);
  report.dilatation_sup_interior =
      dilatation_sup_disk(surface, diagnostics.interior_radius, diagnostics.n_r, diagnostics.n_theta);
  report.dilatation_sup_rho = dilatation_sup(surface, rho, diagnostics.n_theta);
  report.dirichlet_energy = dirichlet_energy(surface, diagnostics.quadrature);
  report.mean_curvature_sup =
      mean_curvature_sup_disk(surface, diagnostics.interior_radius, diagnostics.n_r, diagnostics.n_theta);
  report.fingerprint = shape_fingerprint(surface, diagnostics.fingerprint_samples);
  report.monotone = report.final_config.monotone();
}

SolveReport nesterov_run(const MfsBasis& basis, const BoundaryCurve& curve, const Configuration& initial,
                         const OptimizerSettings& settings, const DiagnosticsSpec& diagnostics) {
  settings.validate();
  if (!curve.has_derivative()) throw ConfigError("optimization requires a curve with derivative data");
  const auto n = static_cast<std::size_t>(basis.size());
  if (initial.size() != n) throw ConfigError("initial configuration size does not match the basis");

  const auto start = std::chrono::steady_clock::now();
  const EnergyModel model(basis, settings.rho);

  SolveReport report;
  report.initial_config = initial;
  report.stop_reason = "max_iters";

  std::vector<double> x(initial.angles().begin(), initial.angles().end());
  std::vector<double> psi_prev = x;
  std::vector<double> psi(n);
  std::vector<double> grad(n);
  // State at the start of the last accepted step, for adaptive restarts.
  std::vector<double> x_saved = x;
  std::vector<double> psi_saved = psi_prev;

  double eta = settings.eta;
  double last_energy = std::numeric_limits<double>::infinity();
  int momentum_n = 1;  // n in (n - 1)/(n + 2); reset after an adaptive restart
  int step = 0;
  bool stopped_at_tolerance = false;

  while (true) {
    const double e = model.energy_and_gradient(curve, x, grad);
    const bool blew_up = !std::isfinite(e) || (step > 0 && e > 10.0 * last_energy);
    if (settings.adaptive_step && blew_up) {
      eta *= 0.5;
      if (eta < 1e-16) throw NumericalError("step size underflow while recovering from divergence");
      x = x_saved;
      psi_prev = psi_saved;
      momentum_n = 1;
      continue;
    }
    if (!std::isfinite(e)) {
      throw NumericalError("energy became non-finite at iteration " + std::to_string(step) +
                           " (step size too large?)");
    }
    if (step % settings.energy_log_stride == 0) report.energy_trace.emplace_back(step, e);
    last_energy = e;

    double gnorm = 0.0;
    for (double g : grad) gnorm = std::max(gnorm, std::abs(g));
    if (gnorm <= settings.grad_tolerance) {
      stopped_at_tolerance = true;
      report.stop_reason = "grad_tolerance";
      break;
    }
    if (step >= settings.max_iters) break;

    x_saved = x;
    psi_saved = psi_prev;
    const double beta = static_cast<double>(momentum_n - 1) / (momentum_n + 2);
    for (std::size_t j = 0; j < n; ++j) {
      psi[j] = x[j] - eta * grad[j];
      x[j] = psi[j] + beta * (psi[j] - psi_prev[j]);
    }
    psi_prev.swap(psi);
    ++momentum_n;
    ++step;
  }

  report.iters_run = step;
  report.eta_final = eta;
  // At a tolerance stop the gradient was small at x itself; otherwise the last
  // gradient step psi is the iterate.
  report.final_config = Configuration(stopped_at_tolerance ? x : psi_prev);
  if (report.energy_trace.empty() || report.energy_trace.back().first != step) {
    report.energy_trace.emplace_back(step, last_energy);
  }

  diagnose(report, basis, curve, settings.rho, diagnostics);
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace mfsplateau

#include "mfsplateau/surface.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace mfsplateau {

namespace {

constexpr double kDegenerateTangent = 1e-12;

// d1 f = 2 Re(df/dz), d2 f = -2 Im(df/dz) for real f.
Vec3 d1(const std::array<Complex, 3>& a) { return {2.0 * a[0].real(), 2.0 * a[1].real(), 2.0 * a[2].real()}; }
Vec3 d2(const std::array<Complex, 3>& a) { return {-2.0 * a[0].imag(), -2.0 * a[1].imag(), -2.0 * a[2].imag()}; }

}  // namespace

Configuration Configuration::equidistant(int n, double offset) {
  std::vector<double> angles(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) angles[static_cast<std::size_t>(j)] = kTwoPi * j / n + offset;
  return Configuration(std::move(angles));
}

std::vector<double> Configuration::reduced() const {
  std::vector<double> out(angles_.size());
  std::transform(angles_.begin(), angles_.end(), out.begin(), wrap_angle);
  return out;
}

bool Configuration::monotone() const {
  const auto n = angles_.size();
  if (n < 2) return false;
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double step = wrap_angle(angles_[(j + 1) % n] - angles_[j]);
    if (!(step > 0.0)) return false;
    total += step;
  }
  // Each step lies in (0, 2 pi) and they sum to a multiple of 2 pi; one turn means monotone.
  return std::abs(total - kTwoPi) < 1e-9;
}

ApproximateSurface::ApproximateSurface(MfsBasis basis, std::array<Coefficients, 3> coefficients,
                                       CurveDescriptor curve, Configuration config)
    : basis_(std::move(basis)),
      coefficients_(std::move(coefficients)),
      curve_(std::move(curve)),
      config_(std::move(config)) {}

Vec3 ApproximateSurface::position(Complex z) const {
  const auto zeta = basis_.singular();
  Vec3 acc{0.0, 0.0, 0.0};
  for (std::size_t k = 0; k < zeta.size(); ++k) {
    const double g = std::log(std::norm(z - zeta[k]));
    for (std::size_t i = 0; i < 3; ++i) acc[i] += coefficients_[i][k] * g;
  }
  return (1.0 / (2.0 * kTwoPi)) * acc;
}

std::array<Complex, 3> ApproximateSurface::dz(Complex z) const {
  const auto zeta = basis_.singular();
  std::array<Complex, 3> acc{};
  for (std::size_t k = 0; k < zeta.size(); ++k) {
    const Complex inv = 1.0 / (z - zeta[k]);
    for (std::size_t i = 0; i < 3; ++i) acc[i] += coefficients_[i][k] * inv;
  }
  for (auto& a : acc) a /= 4.0 * kPi;
  return acc;
}

std::array<Complex, 3> ApproximateSurface::dzz(Complex z) const {
  const auto zeta = basis_.singular();
  std::array<Complex, 3> acc{};
  for (std::size_t k = 0; k < zeta.size(); ++k) {
    const Complex inv = 1.0 / (z - zeta[k]);
    const Complex inv2 = inv * inv;
    for (std::size_t i = 0; i < 3; ++i) acc[i] += coefficients_[i][k] * inv2;
  }
  for (auto& a : acc) a /= -4.0 * kPi;
  return acc;
}

ApproximateSurface build_surface(const MfsBasis& basis, const BoundaryCurve& curve, const Configuration& config) {
  const auto n = static_cast<std::size_t>(basis.size());
  if (config.size() != n) {
    throw ConfigError("configuration has " + std::to_string(config.size()) + " angles, basis has " +
                      std::to_string(n));
  }
  std::array<std::vector<double>, 3> values;
  for (auto& v : values) v.resize(n);
  const auto angles = config.angles();
  for (std::size_t j = 0; j < n; ++j) {
    const Vec3 b = curve(angles[j]);
    for (std::size_t i = 0; i < 3; ++i) values[i][j] = b[i];
  }
  std::array<Coefficients, 3> q{basis.solve(values[0]), basis.solve(values[1]), basis.solve(values[2])};
  return {basis, std::move(q), curve.descriptor(), config};
}

Complex dilatation(const ApproximateSurface& surface, Complex z) {
  const auto a = surface.dz(z);
  return a[0] * a[0] + a[1] * a[1] + a[2] * a[2];
}

double dilatation_sup(const ApproximateSurface& surface, double rho, int samples) {
  double best = 0.0;
  for (int j = 0; j < samples; ++j) {
    best = std::max(best, std::abs(dilatation(surface, std::polar(rho, kTwoPi * j / samples))));
  }
  return best;
}

double dilatation_sup_disk(const ApproximateSurface& surface, double radius, int n_r, int n_theta) {
  double best = std::abs(dilatation(surface, Complex{0.0, 0.0}));
  for (int k = 1; k <= n_r; ++k) best = std::max(best, dilatation_sup(surface, radius * k / n_r, n_theta));
  return best;
}

void gauss_legendre_unit(int order, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(static_cast<std::size_t>(order), 0.0);
  weights.assign(static_cast<std::size_t>(order), 0.0);
  for (int i = 0; i < order; ++i) {
    // Newton on P_order starting from the Chebyshev-like guess.
    double x = std::cos(kPi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes[static_cast<std::size_t>(i)] = 0.5 * (1.0 - x);
    weights[static_cast<std::size_t>(i)] = 1.0 / ((1.0 - x * x) * dp * dp);  // 2/((1-x^2)P'^2), halved for (0,1)
  }
}

double dirichlet_energy(const ApproximateSurface& surface, const QuadratureSpec& quad) {
  if (quad.n_r < 2) throw ConfigError("radial quadrature order must be at least 2");
  if (quad.n_theta < 4) throw ConfigError("angular sample count must be at least 4");
  std::vector<double> nodes;
  std::vector<double> weights;
  gauss_legendre_unit(quad.n_r, nodes, weights);
  double total = 0.0;
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    double ring = 0.0;
    for (int b = 0; b < quad.n_theta; ++b) {
      const auto d = surface.dz(std::polar(nodes[a], kTwoPi * b / quad.n_theta));
      ring += std::norm(d[0]) + std::norm(d[1]) + std::norm(d[2]);
    }
    total += weights[a] * nodes[a] * ring;
  }
  return 2.0 * total * kTwoPi / quad.n_theta;
}

FundamentalForms fundamental_forms(const ApproximateSurface& surface, Complex z) {
  const auto a = surface.dz(z);
  const auto b = surface.dzz(z);
  const Vec3 x1 = d1(a);
  const Vec3 x2 = d2(a);
  // Harmonic coordinates: X_11 = 2 Re(X_zz), X_12 = -2 Im(X_zz), X_22 = -X_11.
  const Vec3 x11{2.0 * b[0].real(), 2.0 * b[1].real(), 2.0 * b[2].real()};
  const Vec3 x12{-2.0 * b[0].imag(), -2.0 * b[1].imag(), -2.0 * b[2].imag()};
  const Vec3 x22 = -1.0 * x11;

  const Vec3 n = cross(x1, x2);
  const double len = norm(n);
  if (!(len >= kDegenerateTangent)) throw NumericalError("degenerate tangent plane");

  FundamentalForms f;
  f.g11 = dot(x1, x1);
  f.g12 = dot(x1, x2);
  f.g22 = dot(x2, x2);
  f.normal = (1.0 / len) * n;
  f.h11 = dot(x11, f.normal);
  f.h12 = dot(x12, f.normal);
  f.h22 = dot(x22, f.normal);
  return f;
}

double mean_curvature(const ApproximateSurface& surface, Complex z) {
  const auto f = fundamental_forms(surface, z);
  return (f.g11 * f.h22 + f.g22 * f.h11 - 2.0 * f.g12 * f.h12) / (2.0 * f.det_g());
}

double mean_curvature_sup_disk(const ApproximateSurface& surface, double radius, int n_r, int n_theta) {
  double best = -1.0;
  auto visit = [&](Complex z) {
    try {
      best = std::max(best, std::abs(mean_curvature(surface, z)));
    } catch (const NumericalError&) {
    }
  };
  visit(Complex{0.0, 0.0});
  for (int k = 1; k <= n_r; ++k) {
    for (int j = 0; j < n_theta; ++j) visit(std::polar(radius * k / n_r, kTwoPi * j / n_theta));
  }
  return best < 0.0 ? std::numeric_limits<double>::quiet_NaN() : best;
}

SurfaceMesh sample_mesh(const ApproximateSurface& surface, int n_r, int n_theta) {
  if (n_r < 1 || n_theta < 3) throw ConfigError("mesh needs n_r >= 1 and n_theta >= 3");
  SurfaceMesh mesh;
  const auto nt = static_cast<std::size_t>(n_theta);
  auto add_vertex = [&](Complex z) {
    mesh.vertices.push_back(surface.position(z));
    mesh.abs_dilatation.push_back(std::abs(dilatation(surface, z)));
    double h = std::numeric_limits<double>::quiet_NaN();
    try {
      h = mean_curvature(surface, z);
    } catch (const NumericalError&) {
    }
    mesh.mean_curvature.push_back(h);
  };
  add_vertex(Complex{0.0, 0.0});
  for (int k = 1; k <= n_r; ++k) {
    for (int j = 0; j < n_theta; ++j) add_vertex(std::polar(static_cast<double>(k) / n_r, kTwoPi * j / n_theta));
  }
  auto ring = [nt](std::size_t k, std::size_t j) { return 1 + (k - 1) * nt + (j % nt); };
  for (std::size_t j = 0; j < nt; ++j) mesh.faces.push_back({0, ring(1, j), ring(1, j + 1)});
  for (std::size_t k = 1; k < static_cast<std::size_t>(n_r); ++k) {
    for (std::size_t j = 0; j < nt; ++j) {
      mesh.faces.push_back({ring(k, j), ring(k + 1, j), ring(k + 1, j + 1), ring(k, j + 1)});
    }
  }
  return mesh;
}

}  // namespace mfsplateau

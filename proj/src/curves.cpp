#include "mfsplateau/curves.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <set>

namespace mfsplateau {

BoundaryCurve::BoundaryCurve(CurveDescriptor descriptor, Map eval, Map deriv)
    : descriptor_(std::move(descriptor)), eval_(std::move(eval)), deriv_(std::move(deriv)) {
  if (!eval_) throw ConfigError("curve '" + descriptor_.name + "' has no evaluation map");
}

Vec3 BoundaryCurve::derivative(double theta) const {
  if (!deriv_) throw ConfigError("curve '" + descriptor_.name + "' has no derivative data");
  return deriv_(theta);
}

BoundaryCurve circle() {
  return {{"circle", {}, {}},
          [](double t) { return Vec3{std::cos(t), std::sin(t), 0.0}; },
          [](double t) { return Vec3{-std::sin(t), std::cos(t), 0.0}; }};
}

BoundaryCurve ellipse(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw ConfigError("ellipse semi-axes must be positive");
  return {{"ellipse", {{"a", a}, {"b", b}}, {}},
          [a, b](double t) { return Vec3{a * std::cos(t), b * std::sin(t), 0.0}; },
          [a, b](double t) { return Vec3{-a * std::sin(t), b * std::cos(t), 0.0}; }};
}

BoundaryCurve cassini_oval(double a) {
  if (!(a > 1.0)) throw ConfigError("cassini oval parameter must exceed 1");
  const double a4 = a * a * a * a;
  auto radius = [a4](double t, double& dr) {
    const double s2 = std::sin(2.0 * t);
    const double c2 = std::cos(2.0 * t);
    const double inner = std::sqrt(a4 - s2 * s2);
    const double r = std::sqrt(c2 + inner);
    const double dinner = -2.0 * s2 * c2 / inner;
    dr = (-2.0 * s2 + dinner) / (2.0 * r);
    return r;
  };
  return {{"cassini", {{"a", a}}, {}},
          [radius](double t) {
            double dr = 0.0;
            const double r = radius(t, dr);
            return Vec3{r * std::cos(t), r * std::sin(t), 0.0};
          },
          [radius](double t) {
            double dr = 0.0;
            const double r = radius(t, dr);
            return Vec3{dr * std::cos(t) - r * std::sin(t), dr * std::sin(t) + r * std::cos(t), 0.0};
          }};
}

BoundaryCurve crown(int n, double amplitude) {
  const double nn = n;
  return {{"crown", {{"n", nn}, {"amplitude", amplitude}}, {}},
          [nn, amplitude](double t) { return Vec3{std::cos(t), std::sin(t), amplitude * std::sin(nn * t)}; },
          [nn, amplitude](double t) {
            return Vec3{-std::sin(t), std::cos(t), amplitude * nn * std::cos(nn * t)};
          }};
}

BoundaryCurve torus_knot(int p, int q) {
  if (p == 0 || q == 0 || std::gcd(p, q) != 1) throw ConfigError("torus knot requires gcd(p, q) = 1");
  const double pp = p;
  const double qq = q;
  return {{"torus_knot", {{"p", pp}, {"q", qq}}, {}},
          [pp, qq](double t) {
            const double w = 2.0 + std::cos(qq * t);
            return Vec3{w * std::cos(pp * t), w * std::sin(pp * t), -std::sin(qq * t)};
          },
          [pp, qq](double t) {
            const double w = 2.0 + std::cos(qq * t);
            const double dw = -qq * std::sin(qq * t);
            return Vec3{dw * std::cos(pp * t) - pp * w * std::sin(pp * t),
                        dw * std::sin(pp * t) + pp * w * std::cos(pp * t), -qq * std::cos(qq * t)};
          }};
}

BoundaryCurve enneper_wire(double r) {
  if (!(r > 0.0) || !(r < std::sqrt(3.0))) throw ConfigError("enneper wire requires 0 < r < sqrt(3)");
  const double r2 = r * r;
  const double r3 = r2 * r;
  return {{"enneper", {{"r", r}}, {}},
          [r, r2, r3](double t) {
            return Vec3{r * std::cos(t) - r3 / 3.0 * std::cos(3.0 * t),
                        -r * std::sin(t) - r3 / 3.0 * std::sin(3.0 * t), r2 * std::cos(2.0 * t)};
          },
          [r, r2, r3](double t) {
            return Vec3{-r * std::sin(t) + r3 * std::sin(3.0 * t), -r * std::cos(t) - r3 * std::cos(3.0 * t),
                        -2.0 * r2 * std::sin(2.0 * t)};
          }};
}

namespace {

double uniform_bspline(int degree, double y) {
  if (degree == 0) return (y >= 0.0 && y < 1.0) ? 1.0 : 0.0;
  if (y <= 0.0 || y >= degree + 1.0) return 0.0;
  return (y * uniform_bspline(degree - 1, y) + (degree + 1.0 - y) * uniform_bspline(degree - 1, y - 1.0)) /
         degree;
}

}  // namespace

double cardinal_bspline(int degree, double x) { return uniform_bspline(degree, x + 0.5 * (degree + 1)); }

double cardinal_bspline_derivative(int degree, double x) {
  if (degree == 0) return 0.0;
  const double y = x + 0.5 * (degree + 1);
  return uniform_bspline(degree - 1, y) - uniform_bspline(degree - 1, y - 1.0);
}

BoundaryCurve bspline_curve(std::span<const Vec3> points, int degree) {
  if (degree < 1 || degree > 9) throw ConfigError("bspline degree must be in [1, 9]");
  const auto m = points.size();
  if (m < static_cast<std::size_t>(degree) + 1) {
    throw ConfigError("bspline of degree " + std::to_string(degree) + " needs at least " +
                      std::to_string(degree + 1) + " points");
  }
  double extent = 0.0;
  for (const auto& p : points) extent = std::max(extent, norm(p - points[0]));
  if (extent < 1e-12) throw ConfigError("degenerate bspline curve: all points coincide");

  // Interpolation S(j) = points[j] is a symmetric circulant system in the
  // control points; solve it with the DFT.
  const double half = 0.5 * (degree + 1);
  const int reach = static_cast<int>(std::floor(half));
  const double md = static_cast<double>(m);
  std::vector<double> symbol(m, 0.0);
  for (std::size_t q = 0; q < m; ++q) {
    double acc = 0.0;
    for (int k = -reach; k <= reach; ++k) acc += cardinal_bspline(degree, k) * std::cos(kTwoPi * q * k / md);
    if (std::abs(acc) < 1e-12) throw ConfigError("bspline interpolation system is singular");
    symbol[q] = acc;
  }
  std::vector<Vec3> control(m, Vec3{0.0, 0.0, 0.0});
  for (int c = 0; c < 3; ++c) {
    std::vector<std::complex<double>> spectrum(m);
    for (std::size_t q = 0; q < m; ++q) {
      std::complex<double> acc{};
      for (std::size_t j = 0; j < m; ++j) acc += points[j][c] * std::polar(1.0, -kTwoPi * double((q * j) % m) / md);
      spectrum[q] = acc / symbol[q];
    }
    for (std::size_t i = 0; i < m; ++i) {
      std::complex<double> acc{};
      for (std::size_t q = 0; q < m; ++q) acc += spectrum[q] * std::polar(1.0, kTwoPi * double((q * i) % m) / md);
      control[i][c] = acc.real() / md;
    }
  }

  auto accumulate = [control, degree, half, md](double theta, bool derivative) {
    double t = std::fmod(theta / kTwoPi * md, md);
    if (t < 0.0) t += md;
    const auto lo = static_cast<long>(std::ceil(t - half));
    const auto hi = static_cast<long>(std::floor(t + half));
    const auto mm = static_cast<long>(md);
    Vec3 out{0.0, 0.0, 0.0};
    for (long i = lo; i <= hi; ++i) {
      const double w = derivative ? cardinal_bspline_derivative(degree, t - i) : cardinal_bspline(degree, t - i);
      const auto& p = control[static_cast<std::size_t>(((i % mm) + mm) % mm)];
      out = out + w * p;
    }
    if (derivative) out = (md / kTwoPi) * out;
    return out;
  };

  CurveDescriptor descriptor{"bspline", {{"degree", static_cast<double>(degree)}},
                             std::vector<Vec3>(points.begin(), points.end())};
  return {std::move(descriptor), [accumulate](double t) { return accumulate(t, false); },
          [accumulate](double t) { return accumulate(t, true); }};
}

namespace {

void check_params(const CurveDescriptor& d, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : d.params) {
    if (!allowed.contains(key)) throw ConfigError("curve '" + d.name + "' has unknown parameter '" + key + "'");
    if (!std::isfinite(value)) throw ConfigError("curve parameter '" + key + "' is not finite");
  }
  if (d.name != "bspline" && !d.control.empty()) {
    throw ConfigError("curve '" + d.name + "' does not take control points");
  }
}

double param(const CurveDescriptor& d, const std::string& key, double fallback) {
  auto it = d.params.find(key);
  return it == d.params.end() ? fallback : it->second;
}

int int_param(const CurveDescriptor& d, const std::string& key, int fallback) {
  const double v = param(d, key, fallback);
  if (v != std::round(v)) throw ConfigError("curve parameter '" + key + "' must be an integer");
  return static_cast<int>(v);
}

}  // namespace

BoundaryCurve make_curve(const CurveDescriptor& d) {
  if (d.name == "circle") {
    check_params(d, {});
    return circle();
  }
  if (d.name == "ellipse") {
    check_params(d, {"a", "b"});
    return ellipse(param(d, "a", 2.0), param(d, "b", 1.0));
  }
  if (d.name == "cassini") {
    check_params(d, {"a"});
    return cassini_oval(param(d, "a", 1.1));
  }
  if (d.name == "crown") {
    check_params(d, {"n", "amplitude"});
    return crown(int_param(d, "n", 5), param(d, "amplitude", 0.3));
  }
  if (d.name == "torus_knot") {
    check_params(d, {"p", "q"});
    return torus_knot(int_param(d, "p", 3), int_param(d, "q", 2));
  }
  if (d.name == "enneper") {
    check_params(d, {"r"});
    return enneper_wire(param(d, "r", 1.1));
  }
  if (d.name == "bspline") {
    check_params(d, {"degree"});
    return bspline_curve(d.control, int_param(d, "degree", 3));
  }
  throw ConfigError("unknown curve '" + d.name + "'");
}

}  // namespace mfsplateau

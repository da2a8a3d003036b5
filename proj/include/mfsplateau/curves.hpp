#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mfsplateau/types.hpp"

namespace mfsplateau {

/// Name + parameters identifying a curve; serializable, and enough to
/// rebuild the curve with make_curve().
struct CurveDescriptor {
  std::string name;
  std::map<std::string, double> params;
  std::vector<Vec3> control;  // bspline only

  bool operator==(const CurveDescriptor&) const = default;
};

/// A 2*pi-periodic map b: [0, 2*pi) -> R^3 with its analytic derivative.
class BoundaryCurve {
 public:
  using Map = std::function<Vec3(double)>;

  BoundaryCurve(CurveDescriptor descriptor, Map eval, Map deriv = {});

  Vec3 operator()(double theta) const { return eval_(theta); }
  /// Throws ConfigError if the curve was built without derivative data.
  Vec3 derivative(double theta) const;
  bool has_derivative() const noexcept { return static_cast<bool>(deriv_); }
  const CurveDescriptor& descriptor() const noexcept { return descriptor_; }

 private:
  CurveDescriptor descriptor_;
  Map eval_;
  Map deriv_;
};

/// Unit circle in the x-y plane; spans the flat disk.
BoundaryCurve circle();

/// (a cos t, b sin t, 0); the default is the 2:1 ellipse.
BoundaryCurve ellipse(double a = 2.0, double b = 1.0);

/// r(t) = sqrt(cos 2t + sqrt(a^4 - sin^2 2t)), b = (r cos t, r sin t, 0). Requires a > 1.
BoundaryCurve cassini_oval(double a = 1.1);

/// (cos t, sin t, amplitude * sin(n t)).
BoundaryCurve crown(int n, double amplitude = 0.3);

/// ((2 + cos qt) cos pt, (2 + cos qt) sin pt, -sin qt). Requires gcd(p, q) = 1.
BoundaryCurve torus_knot(int p, int q);

/// Boundary of the Enneper surface over the disk of radius r, 0 < r < sqrt(3).
BoundaryCurve enneper_wire(double r);

/// Closed uniform B-spline of the given degree interpolating the points at
/// equispaced parameters t_j = 2 pi j / M. Throws ConfigError for fewer than
/// degree + 1 points or coincident points.
BoundaryCurve bspline_curve(std::span<const Vec3> points, int degree = 3);

/// Rebuilds a curve from its descriptor. Throws ConfigError for unknown names
/// or parameters.
BoundaryCurve make_curve(const CurveDescriptor& descriptor);

/// Centered cardinal B-spline of degree d (support [-(d+1)/2, (d+1)/2]).
double cardinal_bspline(int degree, double x);
double cardinal_bspline_derivative(int degree, double x);

}  // namespace mfsplateau

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mfsplateau/curves.hpp"
#include "mfsplateau/optimizer.hpp"
#include "mfsplateau/surface.hpp"

namespace mfsplateau {

/// phi_j = 2 pi j / n + s sin(2 pi m j / n), j = 0..n-1.
Configuration fourier_initial(int n, double s, int m);

/// Monotone periodic interpolation of knot angles (sorted, in [0, 2 pi)) from
/// knot index to angle, sampled at n equispaced knot parameters and reduced
/// mod 2 pi. The interpolant is a piecewise cubic Hermite spline with
/// harmonic-mean slopes, which cannot overshoot, so the samples keep the
/// cyclic order of the knots.
Configuration monotone_resample(std::span<const double> knot_angles, int n);

/// Draws n_knots sorted uniform angles from the counter generator and passes
/// them to monotone_resample(). Throws ConfigError if n_knots < 4 or n < 4.
Configuration random_initial(int n, std::uint64_t seed, int n_knots);

/// Shared settings of a batch of optimizer runs on one curve.
struct BatchSpec {
  CurveDescriptor curve;
  int n = 64;
  double radius = 1.5;
  OptimizerSettings optimizer{};
  DiagnosticsSpec diagnostics{};
  int jobs = 1;  // worker threads; results never depend on it
};

struct SweepSpec {
  std::vector<double> s_values;
  int m = 2;
  BatchSpec batch;
};

struct RandomSearchSpec {
  int samples = 50;
  std::uint64_t seed = 0;
  int n_knots = 8;
  BatchSpec batch;
};

/// Runs task(i) for i in [0, count) on at most `jobs` threads. Results are
/// stored by index. If tasks throw, the exception of the lowest index is
/// rethrown after all workers finish.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& task);

/// One optimization per s value, reports ordered like s_values. A run that
/// fails numerically yields a report with stop_reason "numerical_error: ..."
/// and NaN diagnostics instead of aborting the batch.
std::vector<SolveReport> sweep(const SweepSpec& spec);

/// One optimization per random initial configuration; sample i uses the
/// child stream i of `seed`.
std::vector<SolveReport> random_search(const RandomSearchSpec& spec);

/// The initial configuration used for random-search sample i.
Configuration random_search_initial(const RandomSearchSpec& spec, int index);

struct SolutionCluster {
  std::size_t representative = 0;     // index into the classified reports
  std::vector<std::size_t> members;   // ascending
  double energy_mean = 0.0;
  double energy_spread = 0.0;         // max - min Dirichlet energy
  double tolerance = 0.0;             // width of the significant-digit bin
  int digits = 0;
};

/// Bin index of a value truncated to `digits` significant digits, and the
/// bin width. Two values share a cluster iff their keys match.
struct DigitKey {
  int exponent = 0;
  double mantissa_bin = 0.0;
  double width = 0.0;
  bool operator==(const DigitKey& o) const { return exponent == o.exponent && mantissa_bin == o.mantissa_bin; }
};
DigitKey significant_digit_key(double value, int digits);

/// Groups reports whose Dirichlet energies agree to `digits` significant
/// digits (truncation, so raising `digits` only splits clusters). Reports
/// with a non-finite energy are left out. With use_fingerprint, clusters are
/// further split by the shape fingerprint (max abs difference > 1e-3).
/// Clusters are sorted by mean energy. Throws ConfigError if digits < 1.
std::vector<SolutionCluster> classify(std::span<const SolveReport> reports, int digits,
                                      bool use_fingerprint = false);

}  // namespace mfsplateau

#include "mfsplateau/search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "mfsplateau/rng.hpp"

namespace mfsplateau {

Configuration fourier_initial(int n, double s, int m) {
  if (n < 1) throw ConfigError("configuration size must be positive");
  std::vector<double> angles(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    angles[static_cast<std::size_t>(j)] = kTwoPi * j / n + s * std::sin(kTwoPi * m * j / n);
  }
  return Configuration(std::move(angles));
}

Configuration monotone_resample(std::span<const double> knots, int n) {
  const auto k = knots.size();
  if (k < 4) throw ConfigError("monotone resampling needs at least 4 knots");
  if (n < 1) throw ConfigError("configuration size must be positive");
  for (std::size_t i = 0; i < k; ++i) {
    if (!(knots[i] >= 0.0 && knots[i] < kTwoPi)) throw ConfigError("knot angles must lie in [0, 2 pi)");
    if (i > 0 && knots[i] < knots[i - 1]) throw ConfigError("knot angles must be sorted");
  }

  // Lifted knot values y_i, periodic with y_{i+K} = y_i + 2 pi.
  auto lifted = [&](long i) {
    const long kk = static_cast<long>(k);
    const long wrap = (i >= 0) ? i / kk : -((-i + kk - 1) / kk);
    return knots[static_cast<std::size_t>(i - wrap * kk)] + kTwoPi * static_cast<double>(wrap);
  };
  // Secants and harmonic-mean slopes on the unit-spaced knot grid.
  std::vector<double> slope(k);
  for (std::size_t i = 0; i < k; ++i) {
    const auto ii = static_cast<long>(i);
    const double left = lifted(ii) - lifted(ii - 1);
    const double right = lifted(ii + 1) - lifted(ii);
    slope[i] = (left > 0.0 && right > 0.0) ? 2.0 * left * right / (left + right) : 0.0;
  }

  std::vector<double> angles(static_cast<std::size_t>(n));
  const double kd = static_cast<double>(k);
  for (int j = 0; j < n; ++j) {
    const double t = kd * j / n;
    const auto i = std::min(static_cast<std::size_t>(std::floor(t)), k - 1);
    const double u = t - static_cast<double>(i);
    const double y0 = lifted(static_cast<long>(i));
    const double y1 = lifted(static_cast<long>(i) + 1);
    const double m0 = slope[i];
    const double m1 = slope[(i + 1) % k];
    const double u2 = u * u;
    const double u3 = u2 * u;
    const double value = (2 * u3 - 3 * u2 + 1) * y0 + (u3 - 2 * u2 + u) * m0 + (-2 * u3 + 3 * u2) * y1 + (u3 - u2) * m1;
    angles[static_cast<std::size_t>(j)] = wrap_angle(value);
  }
  return Configuration(std::move(angles));
}

Configuration random_initial(int n, std::uint64_t seed, int n_knots) {
  if (n_knots < 4) throw ConfigError("random initial configuration needs at least 4 knots");
  if (n < 4) throw ConfigError("configuration size must be at least 4");
  const CounterRng rng(seed);
  std::vector<double> knots(static_cast<std::size_t>(n_knots));
  for (std::size_t i = 0; i < knots.size(); ++i) knots[i] = kTwoPi * rng.uniform(i);
  std::sort(knots.begin(), knots.end());
  return monotone_resample(knots, n);
}

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& task) {
  if (jobs < 1) throw ConfigError("jobs must be at least 1");
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto threads = std::min<std::size_t>(static_cast<std::size_t>(jobs), count);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

namespace {

SolveReport failed_report(const Configuration& initial, const std::string& what) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  SolveReport r;
  r.initial_config = initial;
  r.final_config = initial;
  r.final_energy = nan;
  r.dilatation_sup_interior = nan;
  r.dilatation_sup_rho = nan;
  r.dirichlet_energy = nan;
  r.mean_curvature_sup = nan;
  r.stop_reason = "numerical_error: " + what;
  return r;
}

std::vector<SolveReport> run_batch(const BatchSpec& batch, std::size_t count,
                                   const std::function<Configuration(std::size_t)>& initial) {
  const MfsBasis basis(batch.n, batch.radius);
  const BoundaryCurve curve = make_curve(batch.curve);
  batch.optimizer.validate();
  std::vector<SolveReport> reports(count);
  parallel_for(count, batch.jobs, [&](std::size_t i) {
    const Configuration start = initial(i);
    try {
      reports[i] = nesterov_run(basis, curve, start, batch.optimizer, batch.diagnostics);
    } catch (const NumericalError& e) {
      reports[i] = failed_report(start, e.what());
    }
  });
  return reports;
}

}  // namespace

std::vector<SolveReport> sweep(const SweepSpec& spec) {
  return run_batch(spec.batch, spec.s_values.size(),
                   [&](std::size_t i) { return fourier_initial(spec.batch.n, spec.s_values[i], spec.m); });
}

Configuration random_search_initial(const RandomSearchSpec& spec, int index) {
  const CounterRng rng(spec.seed);
  return random_initial(spec.batch.n, rng.child_seed(static_cast<std::uint64_t>(index)), spec.n_knots);
}

std::vector<SolveReport> random_search(const RandomSearchSpec& spec) {
  if (spec.samples < 0) throw ConfigError("samples must be non-negative");
  if (spec.n_knots < 4) throw ConfigError("random initial configuration needs at least 4 knots");
  return run_batch(spec.batch, static_cast<std::size_t>(spec.samples),
                   [&](std::size_t i) { return random_search_initial(spec, static_cast<int>(i)); });
}

DigitKey significant_digit_key(double value, int digits) {
  if (digits < 1) throw ConfigError("digits must be at least 1");
  DigitKey key;
  if (value == 0.0) {
    key.exponent = std::numeric_limits<int>::min();
    return key;
  }
  const double mag = std::abs(value);
  int e = static_cast<int>(std::floor(std::log10(mag)));
  // log10 can be off by one right at powers of ten.
  if (mag >= std::pow(10.0, e + 1)) ++e;
  if (mag < std::pow(10.0, e)) --e;
  key.exponent = e;
  key.width = std::pow(10.0, e - digits + 1);
  key.mantissa_bin = std::copysign(std::floor(mag / key.width), value);
  return key;
}

namespace {

bool same_shape(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(std::abs(a[i] - b[i]) <= 1e-3)) return false;
  }
  return true;
}

}  // namespace

std::vector<SolutionCluster> classify(std::span<const SolveReport> reports, int digits, bool use_fingerprint) {
  if (digits < 1) throw ConfigError("digits must be at least 1");
  std::vector<SolutionCluster> clusters;
  std::vector<DigitKey> keys;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const double d = reports[i].dirichlet_energy;
    if (!std::isfinite(d)) continue;
    const DigitKey key = significant_digit_key(d, digits);
    auto match = clusters.end();
    for (auto it = clusters.begin(); it != clusters.end(); ++it) {
      if (!(keys[static_cast<std::size_t>(it - clusters.begin())] == key)) continue;
      if (use_fingerprint && !same_shape(reports[it->representative].fingerprint, reports[i].fingerprint)) continue;
      match = it;
      break;
    }
    if (match == clusters.end()) {
      SolutionCluster c;
      c.representative = i;
      c.tolerance = key.width;
      c.digits = digits;
      clusters.push_back(std::move(c));
      keys.push_back(key);
      match = clusters.end() - 1;
    }
    match->members.push_back(i);
  }
  for (auto& c : clusters) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double sum = 0.0;
    for (auto i : c.members) {
      const double d = reports[i].dirichlet_energy;
      lo = std::min(lo, d);
      hi = std::max(hi, d);
      sum += d;
    }
    c.energy_mean = sum / static_cast<double>(c.members.size());
    c.energy_spread = hi - lo;
  }
  std::stable_sort(clusters.begin(), clusters.end(),
                   [](const SolutionCluster& a, const SolutionCluster& b) { return a.energy_mean < b.energy_mean; });
  return clusters;
}

}  // namespace mfsplateau

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "doctest.h"
#include "mfsplateau/mfs_basis.hpp"

using namespace mfsplateau;

namespace {

Eigen::MatrixXd dense_collocation(const MfsBasis& b) {
  const int n = b.size();
  Eigen::MatrixXd g(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) g(j, k) = fundamental_solution(b.collocation()[j] - b.singular()[k]);
  }
  return g;
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST_CASE("build_basis: spectrum[0] closed form and direct sum") {
  const MfsBasis b(4, 2.0);
  const double closed = std::log(15.0) / kTwoPi;
  CHECK(b.spectrum()[0] == doctest::Approx(closed).epsilon(1e-14));
  CHECK(b.spectrum()[0] == doctest::Approx(0.430999575646418).epsilon(1e-13));

  // Direct complex sum over singular points: sum_k G(1 - zeta_k).
  double direct = 0.0;
  for (auto z : b.singular()) direct += fundamental_solution(1.0 - z);
  CHECK(b.spectrum()[0] == doctest::Approx(direct).epsilon(1e-14));

  for (int n : {8, 16, 33}) {
    for (double r : {1.1, 1.5, 2.0}) {
      const MfsBasis bb(n, r);
      CHECK(bb.spectrum()[0] == doctest::Approx(std::log(std::pow(r, n) - 1.0) / kTwoPi).epsilon(1e-12));
    }
  }
}

TEST_CASE("build_basis: points on their circles") {
  const MfsBasis b(8, 1.5);
  CHECK(std::abs(b.collocation()[3]) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(b.singular()[5]) == doctest::Approx(1.5).epsilon(1e-15));
  for (std::size_t j = 0; j < 8; ++j) {
    CHECK(std::abs(std::abs(b.collocation()[j]) - 1.0) < 1e-15);
    CHECK(std::abs(b.collocation()[j] - std::polar(1.0, kTwoPi * double(j) / 8)) < 1e-15);
  }
  CHECK(std::abs(b.omega() - std::polar(1.0, kTwoPi / 8)) < 1e-15);
}

TEST_CASE("build_basis: rejects bad layouts") {
  CHECK_THROWS_WITH_AS(MfsBasis(4, 0.9), "radius must exceed 1", ConfigError);
  CHECK_THROWS_AS(MfsBasis(4, 1.0), ConfigError);
  CHECK_THROWS_AS(MfsBasis(3, 1.5), ConfigError);
  CHECK_THROWS_AS(MfsBasis(16, std::nan("")), ConfigError);
}

TEST_CASE("spectrum is real, symmetric and matches the dense eigenvalues") {
  const MfsBasis b(12, 1.7);
  const auto g = dense_collocation(b);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  std::vector<double> mine(b.spectrum().begin(), b.spectrum().end());
  std::sort(mine.begin(), mine.end());
  for (int i = 0; i < 12; ++i) CHECK(mine[static_cast<std::size_t>(i)] == doctest::Approx(es.eigenvalues()(i)).epsilon(1e-12));
  for (int p = 1; p < 12; ++p) CHECK(b.spectrum()[p] == b.spectrum()[12 - p]);
}

TEST_CASE("solve: source data reproduces a unit charge") {
  const MfsBasis b(16, 1.5);
  for (int m : {0, 5, 15}) {
    std::vector<double> f(16);
    for (int j = 0; j < 16; ++j) f[j] = fundamental_solution(b.collocation()[j] - b.singular()[m]);
    const auto q = b.solve(f);
    for (int k = 0; k < 16; ++k) CHECK(std::abs(q[k] - (k == m ? 1.0 : 0.0)) < 1e-11);
  }
}

TEST_CASE("solve: constant data concentrates on mode 0") {
  const MfsBasis b(16, 1.5);
  const std::vector<double> f(16, 2.5);
  const auto q = b.solve(f);
  const Eigen::VectorXd lu = dense_collocation(b).partialPivLu().solve(Eigen::VectorXd::Constant(16, 2.5));
  for (int k = 0; k < 16; ++k) {
    CHECK(q[k] == doctest::Approx(2.5 / b.spectrum()[0]).epsilon(1e-12));
    CHECK(q[k] == doctest::Approx(lu(k)).epsilon(1e-10));
  }
}

TEST_CASE("solve: random data agrees with dense LU") {
  std::mt19937_64 gen(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double r : {1.2, 1.5, 2.0}) {
    const MfsBasis b(16, r);
    std::vector<double> f(16);
    for (auto& x : f) x = u(gen);
    const auto q = b.solve(f);
    const Eigen::VectorXd lu = dense_collocation(b).partialPivLu().solve(Eigen::Map<Eigen::VectorXd>(f.data(), 16));
    const double scale = lu.cwiseAbs().maxCoeff();
    for (int k = 0; k < 16; ++k) CHECK(std::abs(q[k] - lu(k)) <= 1e-10 * scale);
  }
}

TEST_CASE("solve: errors") {
  const MfsBasis b(16, 1.5);
  CHECK_THROWS_AS(b.solve(std::vector<double>(15, 0.0)), ConfigError);
  // N = 64 with R = 3 has spectrum entries far below 1e-14.
  const MfsBasis ill(64, 3.0);
  CHECK_THROWS_WITH_AS(ill.solve(std::vector<double>(64, 1.0)),
                       "ill-posed basis: spectrum entry below 1e-14 (reduce n or radius)", ConfigError);
}

TEST_CASE("inverse kernel gives the inverse circulant") {
  const MfsBasis b(16, 1.5);
  const auto g = dense_collocation(b);
  Eigen::MatrixXd inv(16, 16);
  for (int k = 0; k < 16; ++k) {
    for (int j = 0; j < 16; ++j) inv(k, j) = b.inverse_entry(k, j);
  }
  CHECK((g * inv - Eigen::MatrixXd::Identity(16, 16)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("evaluate: single source and composition") {
  const MfsBasis b(16, 1.5);
  const auto e3 = Coefficients::unit(16, 3);
  for (Complex z : {Complex{0.0, 0.0}, Complex{0.3, -0.2}, Complex{0.0, 1.0}}) {
    CHECK(b.evaluate(e3, z) == doctest::Approx(fundamental_solution(z - b.singular()[3])).epsilon(1e-14));
    const Complex dz = b.evaluate_dz(e3, z);
    const Complex want = 1.0 / (4.0 * kPi * (z - b.singular()[3]));
    CHECK(std::abs(dz - want) < 1e-15);
    const Complex dzz = b.evaluate_dzz(e3, z);
    const Complex want2 = -1.0 / (4.0 * kPi * (z - b.singular()[3]) * (z - b.singular()[3]));
    CHECK(std::abs(dzz - want2) < 1e-15);
  }
  std::vector<double> f(16);
  for (int j = 0; j < 16; ++j) f[j] = fundamental_solution(b.collocation()[j] - b.singular()[0]);
  CHECK(b.evaluate(b.solve(f), 0.0) == doctest::Approx(std::log(1.5) / kTwoPi).epsilon(1e-10));
  const Coefficients zero(std::vector<double>(16, 0.0));
  CHECK(b.evaluate_dz(zero, Complex{0.2, 0.1}) == Complex{0.0, 0.0});
}

TEST_CASE("Re(z^2) boundary data: value and derivatives") {
  const MfsBasis b(64, 1.5);
  std::vector<double> f(64);
  for (int j = 0; j < 64; ++j) f[j] = std::real(b.collocation()[j] * b.collocation()[j]);
  const auto q = b.solve(f);
  CHECK(b.evaluate(q, Complex{0.3, 0.4}) == doctest::Approx(-0.07).epsilon(1e-8));
  CHECK(std::abs(b.evaluate(q, Complex{0.3, 0.4}) + 0.07) < 1e-8);
  CHECK(std::abs(b.evaluate_dz(q, 0.5) - Complex{0.5, 0.0}) < 1e-8);
  // d_zz u = 1, hence u_11 = 2 Re = 2 and u_12 = -2 Im = 0 (with the factor conventions below).
  const Complex uzz = b.evaluate_dzz(q, Complex{0.1, -0.2});
  CHECK(std::abs(uzz - Complex{1.0, 0.0}) < 1e-8);
  CHECK(2.0 * uzz.real() == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(std::abs(-2.0 * uzz.imag()) < 1e-8);
}

TEST_CASE("dzz agrees with finite differences of evaluate") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const MfsBasis b(16, 1.5);
  std::vector<double> qv(16);
  for (auto& x : qv) x = u(gen);
  const Coefficients q(qv);
  const double h = 1e-4;
  for (Complex z : {Complex{0.1, 0.2}, Complex{-0.4, 0.3}, Complex{0.6, -0.5}}) {
    auto val = [&](double dx, double dy) { return b.evaluate(q, z + Complex{dx, dy}); };
    const double u11 = (val(h, 0) - 2 * val(0, 0) + val(-h, 0)) / (h * h);
    const double u12 = (val(h, h) - val(h, -h) - val(-h, h) + val(-h, -h)) / (4 * h * h);
    const Complex uzz = b.evaluate_dzz(q, z);
    // Re(4 u_zz) = 2 u_11, Im(4 u_zz) = -2 u_12
    const double scale = std::max(std::abs(u11), std::abs(u12));
    CHECK(std::abs(2.0 * uzz.real() - u11) <= 1e-6 * scale + 1e-6);
    CHECK(std::abs(-2.0 * uzz.imag() - u12) <= 1e-6 * scale + 1e-6);

    const double u1 = (val(h, 0) - val(-h, 0)) / (2 * h);
    const double u2 = (val(0, h) - val(0, -h)) / (2 * h);
    const Complex uz = b.evaluate_dz(q, z);
    CHECK(2.0 * uz.real() == doctest::Approx(u1).epsilon(1e-6));
    CHECK(-2.0 * uz.imag() == doctest::Approx(u2).epsilon(1e-6));
  }
}

TEST_CASE("property: exact-span reproduction") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n : {8, 24, 40}) {
    const MfsBasis b(n, 1.4);
    std::vector<double> q0(static_cast<std::size_t>(n));
    for (auto& x : q0) x = u(gen);
    const Coefficients truth(q0);
    std::vector<double> f(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) f[j] = b.evaluate(truth, b.collocation()[j]);
    const auto q = b.solve(f);
    for (int t = 0; t < 20; ++t) {
      const Complex z = std::polar(std::sqrt(std::abs(u(gen))), kPi * u(gen));
      const double want = b.evaluate(truth, z);
      CHECK(std::abs(b.evaluate(q, z) - want) <= 1e-10 * std::max(1.0, std::abs(want)));
    }
  }
}

TEST_CASE("property: mean value at the center") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const MfsBasis b(16, 1.5);
  std::vector<double> f(16);
  for (auto& x : f) x = u(gen);
  const auto q = b.solve(f);
  const int m = 2048;
  double mean = 0.0;
  for (int i = 0; i < m; ++i) mean += b.evaluate(q, std::polar(1.0, kTwoPi * i / m));
  mean /= m;
  CHECK(std::abs(b.evaluate(q, 0.0) - mean) < 1e-10 * std::max(1.0, max_abs(q.values())));
}

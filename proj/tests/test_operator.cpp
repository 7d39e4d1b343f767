#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <unsupported/Eigen/KroneckerProduct>

#include "frvn/error.hpp"
#include "frvn/operator.hpp"

using namespace frvn;

namespace {

SchemeConfig scheme(int p, const char* family, double alpha, int dim) {
  const CorrectionFamily f = std::string(family) == "dg" ? CorrectionFamily::dg(p)
                                                          : CorrectionFamily::huynh(p);
  return SchemeConfig(f, alpha, dim);
}

StretchedStencil stencil_1d(double dx, double g) {
  StretchedStencil s = StretchedStencil::uniform(1, dx);
  s.expansion[0] = g;
  return s;
}

}  // namespace

TEST_CASE("p = 0 upwind symbol is the first-order upwind stencil") {
  // du_c/dt = -(u_c - u_up) / dx_up-weighted: Q = g e^{-i k dx/g} / dx - 1 / dx
  const FrDiscretization disc(SchemeConfig(CorrectionFamily::dg(0), 1.0, 1));
  for (double g : {0.8, 1.0, 1.2}) {
    for (double dx : {0.3, 1.0, 2.5}) {
      for (double k : {0.1, 1.3, 3.0}) {
        const auto Q = disc.symbol(stencil_1d(dx, g), {k, 0.0, 0.0}).Q;
        REQUIRE(Q.rows() == 1);
        const Complex expected =
            g * std::exp(Complex(0.0, -k * dx / g)) / dx - 1.0 / dx;
        CHECK(std::abs(Q(0, 0) - expected) < 1e-14);
      }
    }
  }
}

TEST_CASE("p = 0 central flux symbol") {
  const FrDiscretization disc(SchemeConfig(CorrectionFamily::dg(0), 0.5, 1));
  const double k = 0.7;
  const auto Q = disc.symbol(StretchedStencil::uniform(1), {k, 0.0, 0.0}).Q;
  // -(u_down - u_up) / (2 dx) on the Bloch wave
  CHECK(std::abs(Q(0, 0) - Complex(0.0, -std::sin(k))) < 1e-14);
}

TEST_CASE("constant state is an exact null vector on uniform grids") {
  for (int p = 0; p <= 5; ++p) {
    for (double alpha : {0.5, 0.75, 1.0}) {
      for (int dim = 1; dim <= 3; ++dim) {
        const auto s = scheme(p, p == 0 ? "dg" : "huynh", alpha, dim);
        const FrDiscretization disc(s);
        const WaveProbe probe{0.0, dim > 1 ? 0.4 : 0.0, dim > 2 ? 0.2 : 0.0};
        const auto Q = disc.symbol(StretchedStencil::uniform(dim), probe).Q;
        const Eigen::VectorXcd one = Eigen::VectorXcd::Ones(Q.rows());
        CHECK((Q * one).norm() < 1e-12);
      }
    }
  }
}

TEST_CASE("neighbor metric makes a constant state grow on expanding grids") {
  // Row sums at k = 0: -(2/dx)(g C- + C0) 1 = -(2/dx)(g - 1) C- 1 since (C- + C0) 1 = 0.
  for (int p = 0; p <= 4; ++p) {
    const auto s = scheme(p, "dg", 1.0, 1);
    const FrDiscretization disc(s);
    const double g = 1.2;
    const auto Q = disc.symbol(stencil_1d(1.0, g), {0.0, 0.0, 0.0}).Q;
    const Eigen::VectorXcd one = Eigen::VectorXcd::Ones(p + 1);
    const Eigen::VectorXcd expected =
        -(2.0 * (g - 1.0)) * (disc.blocks().local.minus * Eigen::VectorXd::Ones(p + 1)).cast<Complex>();
    CHECK((Q * one - expected).norm() < 1e-12);
    if (p == 0) CHECK(Q(0, 0).real() == doctest::Approx(g - 1.0));
  }
}

TEST_CASE("block structure: C- + C0 + C+ annihilates constants") {
  for (int p = 0; p <= 6; ++p) {
    for (double alpha : {0.5, 1.0}) {
      const auto s = scheme(p, "dg", alpha, 1);
      const FrDiscretization disc(s);
      const auto& B = disc.blocks().local;
      const Eigen::VectorXd one = Eigen::VectorXd::Ones(p + 1);
      CHECK(((B.minus + B.zero + B.plus) * one).norm() < 1e-11);
      if (alpha == 1.0) CHECK(B.plus.norm() == 0.0);
    }
  }
}

TEST_CASE("lift places a block on the requested direction") {
  Eigen::MatrixXd C(2, 2);
  C << 1, 2, 3, 4;
  const Eigen::MatrixXd I2 = Eigen::MatrixXd::Identity(2, 2);
  CHECK((lift(C, 0, 1) - C).norm() == 0.0);
  CHECK((lift(C, 0, 2) - Eigen::kroneckerProduct(I2, C).eval()).norm() == 0.0);
  CHECK((lift(C, 1, 2) - Eigen::kroneckerProduct(C, I2).eval()).norm() == 0.0);
  const Eigen::MatrixXd I4 = Eigen::MatrixXd::Identity(4, 4);
  CHECK((lift(C, 2, 3) - Eigen::kroneckerProduct(C, I4).eval()).norm() == 0.0);
  CHECK((lift(C, 1, 3) - Eigen::kroneckerProduct(I2, Eigen::kroneckerProduct(C, I2).eval()).eval())
            .norm() == 0.0);
}

TEST_CASE("2D symbol at theta = 0 is the 1D symbol on every eta line") {
  for (int p = 1; p <= 4; ++p) {
    const auto s1 = scheme(p, "huynh", 1.0, 1);
    const auto s2 = scheme(p, "huynh", 1.0, 2);
    StretchedStencil st1 = stencil_1d(1.0, 1.1);
    StretchedStencil st2 = StretchedStencil::uniform(2);
    st2.expansion = {1.1, 0.9, 1.0};
    st2.spacing = {1.0, 2.0, 1.0};
    const double k = 0.9;
    const auto Q1 = FrDiscretization(s1).symbol(st1, {k, 0.0, 0.0}).Q;
    const auto Q2 = FrDiscretization(s2).symbol(st2, {k, 0.0, 0.0}).Q;
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(p + 1, p + 1);
    CHECK((Q2 - Eigen::kroneckerProduct(I, Q1).eval()).norm() < 1e-13);
  }
}

TEST_CASE("2D symbol at 45 degrees on a square is symmetric in x and y") {
  // Swapping the node indices (transpose of the tensor layout) maps Q to itself.
  const int p = 2, n = 3;
  const auto s = scheme(p, "huynh", 1.0, 2);
  const auto Q = FrDiscretization(s).symbol(StretchedStencil::uniform(2),
                                            {1.1, std::numbers::pi / 4, 0.0}).Q;
  Eigen::PermutationMatrix<Eigen::Dynamic> P(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) P.indices()[i + n * j] = j + n * i;
  CHECK((P * Q * P.transpose() - Q).norm() < 1e-13);
}

TEST_CASE("conjugate symmetry: Q(-k) = conj(Q(k))") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int p = trial % 5;
    const int dim = 1 + trial % 3;
    const auto s = scheme(p, p == 0 ? "dg" : "huynh", trial % 2 ? 0.5 : 1.0, dim);
    const FrDiscretization disc(s);
    StretchedStencil st = StretchedStencil::uniform(dim);
    st.expansion = {0.8 + 0.1 * (trial % 5), 1.1, 0.95};
    const double theta = dim > 1 ? 0.3 : 0.0, phi = dim > 2 ? 0.2 : 0.0;
    const double k = u(rng);
    const auto Qp = disc.symbol(st, {k, theta, phi}).Q;
    const auto Qm = disc.symbol(st, {-k, theta, phi}).Q;
    CHECK((Qm - Qp.conjugate()).norm() < 1e-12);
  }
}

TEST_CASE("velocity components") {
  const WaveProbe probe{1.0, 0.3, 0.2};
  const auto v1 = probe.velocity(1);
  CHECK(v1[0] == 1.0);
  const auto v2 = probe.velocity(2);
  CHECK(v2[0] == doctest::Approx(std::cos(0.3)));
  CHECK(v2[1] == doctest::Approx(std::sin(0.3)));
  const auto v3 = probe.velocity(3);
  CHECK(v3[0] == doctest::Approx(std::cos(0.2) * std::cos(0.3)));
  CHECK(v3[1] == doctest::Approx(std::cos(0.2) * std::sin(0.3)));
  CHECK(v3[2] == doctest::Approx(std::sin(0.2)));
  CHECK(v3[0] * v3[0] + v3[1] * v3[1] + v3[2] * v3[2] == doctest::Approx(1.0));
}

TEST_CASE("invalid inputs are rejected") {
  const auto s1 = scheme(2, "dg", 1.0, 1);
  const FrDiscretization disc(s1);
  CHECK_THROWS_AS(disc.symbol(StretchedStencil::uniform(1), {1.0, 0.3, 0.0}), InvalidInput);
  CHECK_THROWS_AS(disc.symbol(StretchedStencil::uniform(1), {std::nan(""), 0.0, 0.0}),
                  InvalidInput);
  CHECK_THROWS_AS(disc.symbol(stencil_1d(1.0, 0.0), {1.0, 0.0, 0.0}), InvalidInput);
  CHECK_THROWS_AS(disc.symbol(stencil_1d(-1.0, 1.0), {1.0, 0.0, 0.0}), InvalidInput);
  CHECK_THROWS_AS(disc.symbol(StretchedStencil::uniform(2), {1.0, 0.0, 0.0}), InvalidInput);
  CHECK_THROWS_AS(FrDiscretization(scheme(2, "dg", 0.4, 1)), InvalidInput);
  CHECK_THROWS_AS(FrDiscretization(scheme(2, "dg", 1.1, 1)), InvalidInput);
  CHECK_THROWS_AS(FrDiscretization(scheme(2, "dg", 1.0, 4)), InvalidInput);
}

TEST_CASE("property: central flux is energy neutral on uniform grids") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uk(0.0, 1.0), ut(0.0, std::numbers::pi / 2);
  for (int trial = 0; trial < 60; ++trial) {
    const int p = 1 + trial % 5, dim = 1 + trial % 3;
    const auto s = scheme(p, trial % 2 ? "dg" : "huynh", 0.5, dim);
    const FrDiscretization disc(s);
    const WaveProbe probe{uk(rng) * std::numbers::pi * (p + 1), dim > 1 ? ut(rng) : 0.0,
                          dim > 2 ? ut(rng) : 0.0};
    const auto Q = disc.symbol(StretchedStencil::uniform(dim), probe).Q;
    const Eigen::VectorXcd mu = Q.eigenvalues();
    CHECK(mu.real().cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("property: upwind flux never amplifies on uniform grids") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> uk(0.0, 1.0), ut(0.0, std::numbers::pi / 2);
  for (int trial = 0; trial < 60; ++trial) {
    const int p = trial % 6, dim = 1 + trial % 3;
    const auto s = scheme(p, p == 0 || trial % 2 ? "dg" : "huynh", 1.0, dim);
    const FrDiscretization disc(s);
    StretchedStencil st = StretchedStencil::uniform(dim);
    st.spacing = {1.0, 0.5 + uk(rng), 0.5 + uk(rng)};
    const WaveProbe probe{uk(rng) * 8.0, dim > 1 ? ut(rng) : 0.0, dim > 2 ? ut(rng) : 0.0};
    const Eigen::VectorXcd mu = disc.symbol(st, probe).Q.eigenvalues();
    CHECK(mu.real().maxCoeff() < 1e-10);
  }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "frvn/error.hpp"
#include "frvn/spectrum.hpp"

using namespace frvn;

namespace {

const Complex I(0.0, 1.0);

FrDiscretization make(int p, bool huynh, double alpha, int dim) {
  return FrDiscretization(SchemeConfig(
      huynh ? CorrectionFamily::huynh(p) : CorrectionFamily::dg(p), alpha, dim));
}

}  // namespace

TEST_CASE("p = 0 mode is i times the scalar symbol") {
  const auto disc = make(0, false, 1.0, 1);
  StretchedStencil st = StretchedStencil::uniform(1);
  st.expansion[0] = 1.2;
  const double k = 0.6;
  const auto r = analyze(disc.symbol(st, {k, 0.0, 0.0}));
  const Complex expected = I * (1.2 * std::exp(-I * k / 1.2) - 1.0);
  REQUIRE(r.modes.size() == 1);
  CHECK(std::abs(r.modes[0] - expected) < 1e-14);
  CHECK(r.modes[0].imag() > 0.0);  // growth on the expanding grid
  CHECK(r.kappa == doctest::Approx(1.0));
}

TEST_CASE("decomposition reproduces the symbol and the plane wave") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int p = 1 + trial % 4, dim = 1 + trial % 2;
    const auto disc = make(p, trial % 3 != 0, trial % 2 ? 0.5 : 1.0, dim);
    StretchedStencil st = StretchedStencil::uniform(dim);
    st.expansion = {0.9 + 0.2 * u(rng), 0.9 + 0.2 * u(rng), 1.0};
    const WaveProbe probe{u(rng) * 3.0, dim > 1 ? 0.6 : 0.0, 0.0};
    const auto sym = disc.symbol(st, probe);
    const auto r = analyze(sym);
    CHECK(r.residual < 1e-10);
    for (int m = 0; m < static_cast<int>(r.modes.size()); ++m) {
      CHECK(r.eigenvectors.col(m).norm() == doctest::Approx(1.0));
      const Eigen::VectorXcd lhs = sym.Q * r.eigenvectors.col(m);
      const Eigen::VectorXcd rhs = (-I * r.modes[m]) * r.eigenvectors.col(m);
      CHECK((lhs - rhs).norm() < 1e-9 * std::max(1.0, sym.Q.norm()));
    }
    for (std::size_t m = 1; m < r.modes.size(); ++m) {
      const bool sorted = r.modes[m - 1].real() < r.modes[m].real() ||
                          (r.modes[m - 1].real() == r.modes[m].real() &&
                           r.modes[m - 1].imag() <= r.modes[m].imag());
      CHECK(sorted);
    }
    const Eigen::VectorXcd w = plane_wave_samples(sym);
    CHECK((r.eigenvectors * r.beta - w).norm() < 1e-8 * w.norm());
    CHECK(r.kappa >= 1.0);
  }
}

TEST_CASE("physical mode approximates the exact dispersion at low k") {
  // Uniform upwind FR is super-accurate: |omega - k| = O(k^(2p+2)) for DG and
  // O(k^(2p+1)) for Huynh's g2.
  for (int p = 1; p <= 4; ++p) {
    for (bool huynh : {false, true}) {
      const auto disc = make(p, huynh, 1.0, 1);
      const double k1 = p >= 4 ? 1.0 : 0.4, k2 = k1 / 2;
      const auto r1 = analyze(disc.symbol(StretchedStencil::uniform(1), {k1, 0.0, 0.0}));
      const auto r2 = analyze(disc.symbol(StretchedStencil::uniform(1), {k2, 0.0, 0.0}));
      const double e1 = std::abs(r1.physical() - k1), e2 = std::abs(r2.physical() - k2);
      CHECK(e1 < 1e-2);
      CHECK(std::log2(e1 / e2) > 2 * p + (huynh ? 0.5 : 1.5));
      CHECK(r1.physical().imag() <= 1e-14);
    }
  }
}

TEST_CASE("repeated eigenvalues get an orthonormal eigenspace basis") {
  // At theta = 0 the 2D symbol is I (x) Q_1D: every eigenvalue has multiplicity p+1.
  const auto disc = make(2, true, 1.0, 2);
  const auto r = analyze(disc.symbol(StretchedStencil::uniform(2), {1.0, 0.0, 0.0}));
  CHECK(r.degenerate);
  CHECK(r.residual < 1e-10);
  CHECK(std::isfinite(r.kappa));
  const auto r1 = analyze(make(2, true, 1.0, 1).symbol(StretchedStencil::uniform(1),
                                                       {1.0, 0.0, 0.0}));
  // The tensor mode matrix is I (x) W_1D up to a unitary change inside each
  // eigenspace, so the condition numbers agree.
  CHECK(r.kappa == doctest::Approx(r1.kappa).epsilon(1e-6));
}

TEST_CASE("normalization factor") {
  const int p = 3;
  const WaveProbe zero{1.0, 0.0, 0.0};
  CHECK(normalization_factor(zero, StretchedStencil::uniform(1), p) == doctest::Approx(0.25));
  StretchedStencil st = StretchedStencil::uniform(1, 2.0);
  st.expansion[0] = 1.25;
  CHECK(normalization_factor(zero, st, p) == doctest::Approx(2.0 / 1.25 / 4.0));
  // 2D square at 45 degrees: k_hat = k / (sqrt(2) (p+1))
  const WaveProbe diag{1.0, std::numbers::pi / 4, 0.0};
  CHECK(normalize_wavenumber(1.0, diag, StretchedStencil::uniform(2), p) ==
        doctest::Approx(1.0 / (std::sqrt(2.0) * 4.0)));
  // Nyquist rule k_nq(theta) = k_nq(0) / cos(theta) for theta <= 45 degrees.
  for (double deg : {0.0, 10.0, 30.0, 45.0}) {
    const double t = deg * std::numbers::pi / 180.0;
    CHECK(nyquist_wavenumber({0.0, t, 0.0}, StretchedStencil::uniform(2), p) ==
          doctest::Approx(std::numbers::pi * (p + 1) / std::cos(t)));
  }
  // 3D reduces to 2D at phi = 0 and to 1D along an axis.
  CHECK(normalization_factor({1.0, 0.4, 0.0}, StretchedStencil::uniform(3), p) ==
        doctest::Approx(normalization_factor({1.0, 0.4, 0.0}, StretchedStencil::uniform(2), p)));
  CHECK(normalization_factor({1.0, 0.0, 0.0}, StretchedStencil::uniform(3), p) ==
        doctest::Approx(0.25));
}

TEST_CASE("match_modes recovers a permutation") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 7;
    std::vector<Complex> a(n);
    for (auto& z : a) z = {g(rng), g(rng)};
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Complex> b(n);
    for (int i = 0; i < n; ++i) b[perm[i]] = a[i] + Complex(1e-6 * g(rng), 1e-6 * g(rng));
    const auto m = match_modes(a, b);
    for (int i = 0; i < n; ++i) CHECK(m[i] == perm[i]);
  }
  CHECK_THROWS_AS(match_modes(std::vector<Complex>(2), std::vector<Complex>(3)), InvalidInput);
}

TEST_CASE("branch tracking follows crossing branches") {
  // Two straight branches omega = k and omega = 2 - k cross at k = 1; the
  // sorted output would swap them after the crossing.
  std::vector<double> k;
  std::vector<std::vector<Complex>> modes;
  for (int i = 1; i <= 40; ++i) {
    const double kk = 0.05 * i + 0.013;
    k.push_back(kk);
    std::vector<Complex> set{Complex(kk, -0.01 * kk), Complex(2.0 - kk, -0.5)};
    std::sort(set.begin(), set.end(), [](Complex a, Complex b) { return a.real() < b.real(); });
    modes.push_back(set);
  }
  const BranchTrack t = physical_mode_select(modes, k);
  CHECK(t.ok());
  for (std::size_t i = 0; i < k.size(); ++i) {
    CHECK(t.omega[i].real() == doctest::Approx(k[i]));
    CHECK(t.omega[i].imag() == doctest::Approx(-0.01 * k[i]));
  }
}

TEST_CASE("branch tracking flags exact ties and rejects bad sweeps") {
  const std::vector<double> k{1.0};
  const std::vector<std::vector<Complex>> tie{{Complex(0.5, 0.0), Complex(1.5, 0.0)}};
  CHECK_FALSE(physical_mode_select(tie, k).ok());
  const std::vector<std::vector<Complex>> same{{Complex(1.0, 0.0), Complex(1.0, 0.0)}};
  CHECK(physical_mode_select(same, k).ok());  // a repeated value is not a tie
  const std::vector<double> down{1.0, 0.5};
  const std::vector<std::vector<Complex>> two{{Complex(1.0)}, {Complex(0.5)}};
  CHECK_THROWS_AS(physical_mode_select(two, down), InvalidInput);
  CHECK_THROWS_AS(physical_mode_select(two, k), InvalidInput);
}

TEST_CASE("sweep_modes tracks the physical branch up to Nyquist") {
  for (int p = 1; p <= 4; ++p) {
    const auto disc = make(p, true, 1.0, 1);
    std::vector<double> k;
    for (int i = 1; i <= 80; ++i) k.push_back(std::numbers::pi * (p + 1) * i / 80.0);
    const auto sweep = sweep_modes(disc, StretchedStencil::uniform(1), 0.0, 0.0, k);
    CHECK(sweep.track.ok());
    // Low-k samples sit on omega ~ k; dissipation is non-positive throughout.
    CHECK(std::abs(sweep.track.omega[0] - k[0]) < 1e-4);
    for (const Complex& w : sweep.track.omega) CHECK(w.imag() < 1e-12);
  }
}

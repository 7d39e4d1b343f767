#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "frvn/error.hpp"
#include "frvn/temporal.hpp"

using namespace frvn;

namespace {

const Complex I(0.0, 1.0);

SchemeConfig scheme(int p, bool huynh, double alpha = 1.0, int dim = 1) {
  return SchemeConfig(huynh ? CorrectionFamily::huynh(p) : CorrectionFamily::dg(p), alpha, dim);
}

// Largest tau with max over the circle |R(tau (e^{-i t} - 1))| <= 1, by
// dense sampling and bisection. Eigenvalues of p = 0 upwind on a unit grid.
double upwind_circle_limit(const RkScheme& rk) {
  auto stable = [&](double tau) {
    for (int j = 0; j <= 20000; ++j) {
      const double t = std::numbers::pi * j / 20000.0;
      if (std::abs(rk.amplification(tau * (std::exp(-I * t) - 1.0))) > 1.0 + 1e-12) return false;
    }
    return true;
  };
  double lo = 0.1, hi = 4.0;
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    (stable(mid) ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace

TEST_CASE("stability polynomials") {
  const Complex z(-0.3, 0.7);
  CHECK(std::abs(RkScheme(RkKind::Euler).amplification(z) - (1.0 + z)) < 1e-15);
  CHECK(std::abs(RkScheme(RkKind::RK33).amplification(z) -
                 (1.0 + z + z * z / 2.0 + z * z * z / 6.0)) < 1e-15);
  CHECK(std::abs(RkScheme(RkKind::RK44).amplification(z) -
                 (1.0 + z + z * z / 2.0 + z * z * z / 6.0 + z * z * z * z / 24.0)) < 1e-15);
  CHECK(RkScheme::parse("rk33").stages() == 3);
  CHECK(RkScheme::parse("euler").name() == "euler");
  CHECK_THROWS_AS(RkScheme::parse("rk45"), InvalidInput);
}

TEST_CASE("RK44 imaginary-axis stability bound is 2 sqrt 2") {
  const RkScheme rk(RkKind::RK44);
  const double bound = 2.0 * std::sqrt(2.0);
  CHECK(std::abs(rk.amplification(I * bound)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(rk.amplification(I * (bound * 0.999))) < 1.0);
  CHECK(std::abs(rk.amplification(I * (bound * 1.001))) > 1.0);
  // Euler is unstable on the whole imaginary axis.
  CHECK(std::abs(RkScheme(RkKind::Euler).amplification(I * 1e-3)) > 1.0);
}

TEST_CASE("p = 0 upwind with forward Euler has CFL 1") {
  const FrDiscretization disc(scheme(0, false));
  const auto r = cfl_limit(disc, StretchedStencil::uniform(1), {}, RkScheme(RkKind::Euler));
  CHECK_FALSE(r.unstable_at_zero);
  CHECK(r.cfl_limit == doctest::Approx(1.0).epsilon(2e-4));
  CHECK(r.cfl_limit <= 1.0);
}

TEST_CASE("p = 0 upwind CFL for RK33 and RK44 matches the direct circle search") {
  const FrDiscretization disc(scheme(0, false));
  for (RkKind kind : {RkKind::RK33, RkKind::RK44}) {
    const RkScheme rk(kind);
    const auto r = cfl_limit(disc, StretchedStencil::uniform(1), {}, rk);
    CHECK(r.cfl_limit == doctest::Approx(upwind_circle_limit(rk)).epsilon(3e-4));
  }
}

TEST_CASE("CFL scales with the cell width") {
  const FrDiscretization disc(scheme(2, true));
  const RkScheme rk(RkKind::RK44);
  const auto a = cfl_limit(disc, StretchedStencil::uniform(1, 1.0), {}, rk);
  const auto b = cfl_limit(disc, StretchedStencil::uniform(1, 3.0), {}, rk);
  CHECK(b.cfl_limit == doctest::Approx(a.cfl_limit).epsilon(3e-4));
  CHECK(b.tau_limit == doctest::Approx(3.0 * a.tau_limit).epsilon(3e-4));
}

TEST_CASE("known CFL limits: Huynh beats DG for RK44") {
  const RkScheme rk(RkKind::RK44);
  for (int p = 1; p <= 4; ++p) {
    const auto dg = cfl_limit(FrDiscretization(scheme(p, false)), StretchedStencil::uniform(1), {}, rk);
    const auto g2 = cfl_limit(FrDiscretization(scheme(p, true)), StretchedStencil::uniform(1), {}, rk);
    CHECK(g2.cfl_limit > dg.cfl_limit);
    CHECK(dg.cfl_limit > 0.0);
  }
}

TEST_CASE("spectral mapping agrees with the matrix update operator") {
  const FrDiscretization disc(scheme(3, true, 1.0, 2));
  StretchedStencil st = StretchedStencil::uniform(2);
  st.spacing[1] = 0.7;
  const RkScheme rk(RkKind::RK44);
  for (double k : {0.3, 1.7, 4.1}) {
    const auto sym = disc.symbol(st, {k, 0.5, 0.0});
    for (double tau : {0.05, 0.1, 0.2}) {
      const auto R = build_update(sym, rk, tau);
      double mapped = 0.0;
      for (const Complex& mu : sym.Q.eigenvalues()) {
        mapped = std::max(mapped, std::abs(rk.amplification(tau * mu)));
      }
      CHECK(R.spectral_radius() == doctest::Approx(mapped).epsilon(1e-9));
    }
  }
  CHECK_THROWS_AS(build_update(disc.symbol(st, {1.0, 0.5, 0.0}), rk, 0.0), InvalidInput);
}

TEST_CASE("CFL limit brackets the stability boundary") {
  const FrDiscretization disc(scheme(3, true));
  const RkScheme rk(RkKind::RK44);
  const StretchedStencil st = StretchedStencil::uniform(1);
  const auto r = cfl_limit(disc, st, {}, rk);
  const AmplificationScan scan(disc, st, {}, rk);
  CHECK(scan.sup(r.tau_limit).rho <= 1.0 + 1e-9);
  CHECK(scan.sup(r.tau_limit * 1.01).rho > 1.0 + 1e-9);
  CHECK(r.worst_k > 0.0);
  CHECK(r.worst_k <= scan.k_nyquist());
}

TEST_CASE("cfl_number sums the directional Courant numbers") {
  StretchedStencil st = StretchedStencil::uniform(2);
  st.spacing = {1.0, 0.5, 1.0};
  const double t = 0.4;
  CHECK(cfl_number(0.1, {0.0, t, 0.0}, st) ==
        doctest::Approx(0.1 * (std::cos(t) + std::sin(t) / 0.5)));
}

TEST_CASE("expanding grids are unstable for every time step") {
  const FrDiscretization disc(scheme(3, true));
  StretchedStencil st = StretchedStencil::uniform(1);
  st.expansion[0] = 1.1;
  const auto r = cfl_limit(disc, st, {}, RkScheme(RkKind::RK44));
  CHECK(r.unstable_at_zero);
  CHECK(r.cfl_limit == 0.0);
  st.expansion[0] = 0.9;
  const auto c = cfl_limit(disc, st, {}, RkScheme(RkKind::RK44));
  CHECK_FALSE(c.unstable_at_zero);
  CHECK(c.cfl_limit > 0.0);
}

TEST_CASE("fully-discrete modes converge to the semi-discrete ones") {
  const FrDiscretization disc(scheme(3, true));
  const auto sym = disc.symbol(StretchedStencil::uniform(1), {1.2, 0.0, 0.0});
  for (double tau : {1e-2, 1e-3}) {
    const auto fd = fully_discrete_spectrum(sym, RkScheme(RkKind::RK44), tau);
    for (std::size_t m = 0; m < fd.semi_discrete.size(); ++m) {
      // RK44 local error in omega is O(tau^4 |omega|^5).
      const double bound = 0.1 * std::pow(tau * std::abs(fd.semi_discrete[m]), 4) *
                               std::abs(fd.semi_discrete[m]) + 1e-10;
      CHECK(std::abs(fd.spectrum.modes[m] - fd.semi_discrete[m]) < bound);
    }
    CHECK(fd.over_dissipated.empty());
  }
}

TEST_CASE("fully-discrete p = 0 Euler matches the hand formula") {
  // lambda = e^{i k tau} (1 + tau (e^{-ik} - 1)), omega = i log(lambda) / tau + k
  const FrDiscretization disc(scheme(0, false));
  const double k = 0.8, tau = 0.3;
  const auto fd = fully_discrete_spectrum(disc.symbol(StretchedStencil::uniform(1), {k, 0.0, 0.0}),
                                          RkScheme(RkKind::Euler), tau);
  const Complex lambda = std::exp(I * k * tau) * (1.0 + tau * (std::exp(-I * k) - 1.0));
  const Complex expected = I * std::log(lambda) / tau + k;
  CHECK(std::abs(fd.spectrum.modes[0] - expected) < 1e-13);
}

TEST_CASE("annihilated modes are flagged") {
  // k = pi, tau = 1/2: tau mu = -1 and forward Euler maps it to zero.
  const FrDiscretization disc(scheme(0, false));
  const auto fd =
      fully_discrete_spectrum(disc.symbol(StretchedStencil::uniform(1), {std::numbers::pi, 0.0, 0.0}),
                              RkScheme(RkKind::Euler), 0.5);
  REQUIRE(fd.over_dissipated.size() == 1);
  CHECK(fd.spectrum.modes[0].imag() == -std::numeric_limits<double>::infinity());
}

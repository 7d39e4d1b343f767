#include "frvn/temporal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "frvn/error.hpp"

namespace frvn {

namespace {

std::vector<double> truncated_exponential(int stages) {
  std::vector<double> c(stages + 1);
  double factorial = 1.0;
  for (int m = 0; m <= stages; ++m) {
    if (m > 0) factorial *= m;
    c[m] = 1.0 / factorial;
  }
  return c;
}

constexpr double kGolden = 0.6180339887498949;
constexpr double kAnnihilated = 1e-14;

}  // namespace

RkScheme::RkScheme(RkKind kind) : kind_(kind) {
  switch (kind) {
    case RkKind::Euler:
      coefficients_ = truncated_exponential(1);
      break;
    case RkKind::RK33:
      coefficients_ = truncated_exponential(3);
      break;
    case RkKind::RK44:
      coefficients_ = truncated_exponential(4);
      break;
  }
}

RkScheme RkScheme::parse(const std::string& name) {
  if (name == "euler") return RkScheme(RkKind::Euler);
  if (name == "rk33") return RkScheme(RkKind::RK33);
  if (name == "rk44") return RkScheme(RkKind::RK44);
  throw InvalidInput("unknown Runge-Kutta scheme '" + name + "' (euler|rk33|rk44)");
}

std::string RkScheme::name() const {
  switch (kind_) {
    case RkKind::Euler:
      return "euler";
    case RkKind::RK33:
      return "rk33";
    case RkKind::RK44:
      return "rk44";
  }
  return "unknown";
}

Complex RkScheme::amplification(Complex z) const {
  Complex value = coefficients_.back();
  for (int m = stages() - 1; m >= 0; --m) value = coefficients_[m] + z * value;
  return value;
}

double UpdateOperator::spectral_radius() const {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(R, false);
  if (solver.info() != Eigen::Success) throw NumericalError("eigensolver failed on R");
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

UpdateOperator build_update(const SemiDiscreteSymbol& symbol, const RkScheme& rk,
                            double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw InvalidInput("time step tau must be finite and positive");
  }
  const auto& c = rk.coefficients();
  const Eigen::Index n = symbol.Q.rows();
  const Eigen::MatrixXcd Z = tau * symbol.Q;
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd R = c.back() * I;
  for (int m = rk.stages() - 1; m >= 0; --m) R = c[m] * I + Z * R;
  if (!R.allFinite()) throw NumericalError("update operator overflowed for tau = " +
                                           std::to_string(tau));
  return {R, tau};
}

double cfl_number(double tau, const WaveProbe& probe, const StretchedStencil& stencil) {
  const auto velocity = probe.velocity(stencil.dim);
  double sum = 0.0;
  for (int dir = 0; dir < stencil.dim; ++dir) {
    sum += std::abs(velocity[dir]) / stencil.spacing[dir];
  }
  return tau * sum;
}

AmplificationScan::AmplificationScan(const FrDiscretization& disc,
                                     const StretchedStencil& stencil,
                                     const WaveProbe& angles, const RkScheme& rk,
                                     const CflOptions& options)
    : disc_(disc), stencil_(stencil), angles_(angles), rk_(rk), options_(options) {
  if (options.samples < 2) throw InvalidInput("CFL search needs at least 2 k samples");
  k_nyquist_ = nyquist_wavenumber(angles, stencil, disc.scheme().order);
  k_.resize(options.samples);
  eigenvalues_.resize(options.samples);
  for (int j = 0; j < options.samples; ++j) {
    k_[j] = k_nyquist_ * (j + 1.0) / options.samples;
    eigenvalues_[j] = eigenvalues_at(k_[j]);
  }
}

Eigen::VectorXcd AmplificationScan::eigenvalues_at(double k) const {
  WaveProbe probe = angles_;
  probe.k = k;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(disc_.symbol(stencil_, probe).Q,
                                                     false);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigensolver failed during the CFL scan");
  }
  return solver.eigenvalues();
}

AmplificationScan::Growth AmplificationScan::max_growth() const {
  Growth growth{-std::numeric_limits<double>::infinity(), 0.0};
  for (std::size_t j = 0; j < k_.size(); ++j) {
    for (const Complex& mu : eigenvalues_[j]) {
      if (mu.real() > growth.rate) growth = {mu.real(), k_[j]};
    }
  }
  return growth;
}

double AmplificationScan::rho_at(double tau, const Eigen::VectorXcd& eigenvalues) const {
  double rho = 0.0;
  for (const Complex& mu : eigenvalues) rho = std::max(rho, std::abs(rk_.amplification(tau * mu)));
  return rho;
}

AmplificationScan::Peak AmplificationScan::sup(double tau) const {
  Peak peak;
  std::size_t best = 0;
  for (std::size_t j = 0; j < k_.size(); ++j) {
    const double rho = rho_at(tau, eigenvalues_[j]);
    if (rho > peak.rho) {
      peak.rho = rho;
      peak.k = k_[j];
      best = j;
    }
  }
  if (!options_.refine) return peak;

  // Golden-section search for the maximum on the bracket around the peak.
  double lo = best == 0 ? 0.5 * k_[0] : k_[best - 1];
  double hi = best + 1 == k_.size() ? k_.back() : k_[best + 1];
  auto f = [&](double k) { return rho_at(tau, eigenvalues_at(k)); };
  double a = hi - kGolden * (hi - lo), b = lo + kGolden * (hi - lo);
  double fa = f(a), fb = f(b);
  for (int it = 0; it < 24; ++it) {
    if (fa > fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - kGolden * (hi - lo);
      fa = f(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + kGolden * (hi - lo);
      fb = f(b);
    }
  }
  if (fa > peak.rho) peak = {fa, a};
  if (fb > peak.rho) peak = {fb, b};
  return peak;
}

CflResult cfl_limit(const FrDiscretization& disc, const StretchedStencil& stencil,
                    const WaveProbe& angles, const RkScheme& rk,
                    const CflOptions& options) {
  stencil.validate();
  const AmplificationScan scan(disc, stencil, angles, rk, options);
  const double unit_tau = cfl_number(1.0, angles, stencil);  // CFL per unit tau
  const double threshold = 1.0 + options.stable_tol;

  CflResult result;
  // Stability as tau -> 0 needs every semi-discrete mode to be non-growing.
  const auto growth = scan.max_growth();
  if (growth.rate > 1e-7 * unit_tau) {
    result.unstable_at_zero = true;
    result.worst_k = growth.k;
    return result;
  }

  double lo = 0.0, hi = 1.0 / unit_tau;
  AmplificationScan::Peak hi_peak = scan.sup(hi);
  for (int it = 0; hi_peak.rho <= threshold; ++it) {
    if (it > 60) throw NumericalError("CFL search failed to find an unstable time step");
    lo = hi;
    hi *= 2.0;
    hi_peak = scan.sup(hi);
  }
  while (hi - lo > options.relative_width * hi) {
    const double mid = 0.5 * (lo + hi);
    const auto peak = scan.sup(mid);
    if (peak.rho <= threshold) {
      lo = mid;
    } else {
      hi = mid;
      hi_peak = peak;
    }
  }
  result.tau_limit = lo;
  result.cfl_limit = cfl_number(lo, angles, stencil);
  result.worst_k = hi_peak.k;
  return result;
}

FullyDiscreteResult fully_discrete_spectrum(const SemiDiscreteSymbol& symbol,
                                            const RkScheme& rk, double tau,
                                            const SpectrumOptions& options) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw InvalidInput("time step tau must be finite and positive");
  }
  FullyDiscreteResult result;
  result.spectrum = analyze(symbol, options);
  result.semi_discrete = result.spectrum.modes;
  const double k = symbol.probe.k;
  const Complex I(0.0, 1.0);
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t m = 0; m < result.semi_discrete.size(); ++m) {
    const Complex omega = result.semi_discrete[m];
    const Complex lambda = std::exp(I * k * tau) * rk.amplification(-I * omega * tau);
    if (std::abs(lambda) <= kAnnihilated) {
      result.spectrum.modes[m] =
          Complex(omega.real(), -std::numeric_limits<double>::infinity());
      result.over_dissipated.push_back(static_cast<int>(m));
      continue;
    }
    Complex log_lambda = std::log(lambda);
    const double target = (k - omega.real()) * tau;
    const double turns = std::round((target - log_lambda.imag()) / two_pi);
    log_lambda += Complex(0.0, turns * two_pi);
    result.spectrum.modes[m] = I * log_lambda / tau + k;
  }
  return result;
}

}  // namespace frvn

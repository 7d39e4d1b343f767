#ifndef FRVN_TEMPORAL_HPP_
#define FRVN_TEMPORAL_HPP_

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "frvn/operator.hpp"
#include "frvn/spectrum.hpp"

namespace frvn {

enum class RkKind { Euler, RK33, RK44 };

/// Explicit Runge-Kutta scheme, represented by its stability polynomial
/// R(z) = sum_{m <= s} z^m / m!. For linear autonomous problems every
/// s-stage order-s method shares this polynomial; RK44 is the classical
/// four-stage scheme.
class RkScheme {
 public:
  explicit RkScheme(RkKind kind);

  static RkScheme parse(const std::string& name);  // euler | rk33 | rk44

  RkKind kind() const { return kind_; }
  std::string name() const;
  int stages() const { return static_cast<int>(coefficients_.size()) - 1; }
  const std::vector<double>& coefficients() const { return coefficients_; }

  /// R(z) by Horner's rule.
  Complex amplification(Complex z) const;

 private:
  RkKind kind_;
  std::vector<double> coefficients_;
};

struct UpdateOperator {
  Eigen::MatrixXcd R;
  double tau = 0.0;

  double spectral_radius() const;
};

/// R = R(tau Q) as a matrix polynomial in Horner form. Throws InvalidInput for
/// tau <= 0 and NumericalError if the result overflows.
UpdateOperator build_update(const SemiDiscreteSymbol& symbol, const RkScheme& rk,
                            double tau);

/// CFL_d = tau * sum_i |a_i| / dx_i.
double cfl_number(double tau, const WaveProbe& probe, const StretchedStencil& stencil);

struct CflOptions {
  int samples = 257;           // uniform k samples in (0, k_nyquist]
  bool refine = true;          // golden-section refinement around the max
  double relative_width = 1e-4;
  double stable_tol = 1e-9;    // rho <= 1 + stable_tol counts as stable
};

struct CflResult {
  double cfl_limit = 0.0;
  double tau_limit = 0.0;
  double worst_k = 0.0;        // k attaining the sup just above the limit
  bool unstable_at_zero = false;  // no stable tau: cfl_limit reported as 0
};

/// Samples the eigenvalues of Q over (0, k_nyquist] once, then answers
/// sup_k rho(R(tau Q(k))) for any tau through the spectral mapping
/// rho(R(tau Q)) = max_m |R(tau lambda_m)|.
class AmplificationScan {
 public:
  AmplificationScan(const FrDiscretization& disc, const StretchedStencil& stencil,
                    const WaveProbe& angles, const RkScheme& rk,
                    const CflOptions& options = {});

  struct Peak {
    double rho = 0.0;
    double k = 0.0;
  };

  /// sup over sampled k of rho(R), refined around the running maximum.
  Peak sup(double tau) const;
  double k_nyquist() const { return k_nyquist_; }

  struct Growth {
    double rate = 0.0;  // max Re(mu) over sampled eigenvalues of Q
    double k = 0.0;
  };
  Growth max_growth() const;

 private:
  double rho_at(double tau, const Eigen::VectorXcd& eigenvalues) const;
  Eigen::VectorXcd eigenvalues_at(double k) const;

  const FrDiscretization& disc_;
  StretchedStencil stencil_;
  WaveProbe angles_;
  RkScheme rk_;
  CflOptions options_;
  double k_nyquist_ = 0.0;
  std::vector<double> k_;
  std::vector<Eigen::VectorXcd> eigenvalues_;
};

/// Largest stable time step by bisection on tau; angles taken from `angles`
/// (its k is ignored). Schemes unstable for every tau (expanding grids)
/// return cfl_limit = 0 with unstable_at_zero set.
CflResult cfl_limit(const FrDiscretization& disc, const StretchedStencil& stencil,
                    const WaveProbe& angles, const RkScheme& rk,
                    const CflOptions& options = {});

/// Fully-discrete modes: lambda_m = exp(i k tau) R(tau mu_m) over the
/// eigenvalues mu_m of Q, mapped to omega_m = k c_m with
/// c_m = i log(lambda_m) / (k tau) + 1. The branch of the logarithm is the
/// one closest to the semi-discrete mode, which makes it continuous in k.
/// Modes annihilated in one step (|lambda| <= 1e-14) get Im(omega) = -inf and
/// are listed in `over_dissipated`.
struct FullyDiscreteResult {
  SpectrumResult spectrum;            // modes replaced by fully-discrete omega
  std::vector<Complex> semi_discrete; // omega of the same modes before mapping
  std::vector<int> over_dissipated;
};

FullyDiscreteResult fully_discrete_spectrum(const SemiDiscreteSymbol& symbol,
                                            const RkScheme& rk, double tau,
                                            const SpectrumOptions& options = {});

}  // namespace frvn

#endif  // FRVN_TEMPORAL_HPP_

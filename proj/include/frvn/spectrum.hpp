#ifndef FRVN_SPECTRUM_HPP_
#define FRVN_SPECTRUM_HPP_

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "frvn/operator.hpp"

namespace frvn {

struct SpectrumOptions {
  /// Physical coordinates of the central cell's lower corner; shifts the
  /// phase of the projected plane wave.
  std::array<double, 3> origin{0.0, 0.0, 0.0};
  /// Eigenvalues of Q closer than degenerate_tol * max(1, |Q|_F) are treated
  /// as one repeated eigenvalue.
  double degenerate_tol = 1e-12;
  /// kappa above this flags the decomposition as ill-conditioned.
  double ill_conditioned_kappa = 1e8;
};

/// Modes of u(t) = W exp(-i diag(omega) t) beta for one symbol.
struct SpectrumResult {
  std::vector<Complex> modes;      // omega_m = i * eig_m(Q), sorted
  Eigen::MatrixXcd eigenvectors;   // W, unit-norm columns matching `modes`
  Eigen::VectorXcd beta;           // W beta = plane wave samples (least squares)
  int physical_index = 0;          // mode carrying most of the plane wave
  double k = 0.0;
  double k_hat = 0.0;              // normalized wavenumber
  double scale = 0.0;              // k_hat / k, also applied to omega
  double kappa = 1.0;              // sigma_max(W) / sigma_min(W)
  double residual = 0.0;           // |Q - W Lambda W^-1|_F / |Q|_F
  bool ill_conditioned = false;
  bool degenerate = false;

  Complex physical() const { return modes[physical_index]; }
  Complex normalized(int m) const { return modes[m] * scale; }
};

/// Eigen-decomposition of a symbol: omega, mode matrix W, plane-wave weights
/// beta and kappa(W). Throws NumericalError if the eigensolver fails.
///
/// Modes are sorted by Re(omega), then Im(omega). Repeated eigenvalues get an
/// orthonormal basis of their eigenspace. The physical mode here is the one
/// with the largest |beta_m|; across a wavenumber sweep use
/// physical_mode_select instead.
SpectrumResult analyze(const SemiDiscreteSymbol& symbol,
                       const SpectrumOptions& options = {});

/// Plane wave exp(i k a.x) sampled at the central cell's solution points.
Eigen::VectorXcd plane_wave_samples(const SemiDiscreteSymbol& symbol,
                                    const std::array<double, 3>& origin = {});

/// Factor s with k_hat = s * k. In 2D
///
///   s = max(cos t, sin t) / (p + 1) * sqrt((dx cos t / gx)^2 + (dy sin t / gy)^2),
///
/// in 1D the theta = 0 reduction dx / ((p + 1) gx), in 3D the same form over
/// the three velocity components.
double normalization_factor(const WaveProbe& probe, const StretchedStencil& stencil,
                            int order);

double normalize_wavenumber(double k, const WaveProbe& probe,
                            const StretchedStencil& stencil, int order);

/// Wavenumber with k_hat = pi.
double nyquist_wavenumber(const WaveProbe& probe, const StretchedStencil& stencil,
                          int order);

/// Result of following eigenvalue branches across an ascending k sweep.
struct BranchTrack {
  std::vector<int> index;            // physical mode index at every sample
  std::vector<Complex> omega;        // physical omega at every sample
  std::vector<std::size_t> ambiguous;  // samples where two branches tied

  bool ok() const { return ambiguous.empty(); }
};

/// Nearest-neighbor assignment between two eigenvalue sets: result[i] is the
/// index in `next` matched to prediction[i]. Greedy on ascending distance,
/// then pairwise swaps until the total distance stops decreasing.
std::vector<int> match_modes(std::span<const Complex> prediction,
                             std::span<const Complex> next);

/// Follows the physical branch: at the first sample the mode closest to the
/// exact dispersion omega = k, afterwards the branch continuous in k. Branch
/// positions are predicted by linear extrapolation from the two previous
/// samples before matching.
BranchTrack physical_mode_select(std::span<const std::vector<Complex>> modes,
                                 std::span<const double> k,
                                 double ambiguity_tol = 1e-9);

/// Spectra over an ascending list of wavenumbers at fixed angles with the
/// physical branch tracked across them.
struct ModeSweep {
  std::vector<SpectrumResult> spectra;
  BranchTrack track;
};

ModeSweep sweep_modes(const FrDiscretization& disc, const StretchedStencil& stencil,
                      double theta, double phi, std::span<const double> k_values,
                      const SpectrumOptions& options = {});

}  // namespace frvn

#endif  // FRVN_SPECTRUM_HPP_

#include "frvn/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "frvn/error.hpp"

namespace frvn {

namespace {

// Groups indices whose values lie within tol of each other (transitively).
std::vector<std::vector<int>> cluster(const Eigen::VectorXcd& values, double tol) {
  const int n = static_cast<int>(values.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(values[i] - values[j]) <= tol) parent[find(i)] = find(j);
    }
  }
  std::vector<std::vector<int>> groups(n);
  for (int i = 0; i < n; ++i) groups[find(i)].push_back(i);
  std::erase_if(groups, [](const auto& g) { return g.empty(); });
  return groups;
}

}  // namespace

Eigen::VectorXcd plane_wave_samples(const SemiDiscreteSymbol& symbol,
                                    const std::array<double, 3>& origin) {
  const auto& scheme = symbol.scheme;
  const int n = scheme.order + 1;
  const int size = scheme.nodes_per_cell();
  const auto points = make_points(scheme.order, scheme.rule);
  const auto velocity = symbol.probe.velocity(scheme.dim);
  Eigen::VectorXcd samples(size);
  for (int idx = 0; idx < size; ++idx) {
    int rest = idx;
    double phase = 0.0;
    for (int dir = 0; dir < scheme.dim; ++dir) {
      const double xi = points.nodes[rest % n];
      rest /= n;
      const double x = origin[dir] + 0.5 * (xi + 1.0) * symbol.stencil.spacing[dir];
      phase += velocity[dir] * x;
    }
    samples[idx] = std::exp(Complex(0.0, symbol.probe.k * phase));
  }
  return samples;
}

SpectrumResult analyze(const SemiDiscreteSymbol& symbol, const SpectrumOptions& options) {
  const Eigen::MatrixXcd& Q = symbol.Q;
  const int size = static_cast<int>(Q.rows());
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(Q, true);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigensolver failed to converge on the FR symbol");
  }
  const Eigen::VectorXcd lambda = solver.eigenvalues();
  Eigen::MatrixXcd W = solver.eigenvectors();
  if (!lambda.allFinite() || !W.allFinite()) {
    throw NumericalError("eigensolver returned non-finite values");
  }

  SpectrumResult result;
  const double q_norm = Q.norm();
  const double tol = options.degenerate_tol * std::max(1.0, q_norm);
  for (const auto& group : cluster(lambda, tol)) {
    if (group.size() < 2) continue;
    result.degenerate = true;
    Complex mean(0.0, 0.0);
    for (int i : group) mean += lambda[i];
    mean /= static_cast<double>(group.size());
    const Eigen::MatrixXcd shifted = Q - mean * Eigen::MatrixXcd::Identity(size, size);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(shifted, Eigen::ComputeFullV);
    const Eigen::MatrixXcd& V = svd.matrixV();
    // Singular values come sorted descending; the eigenspace is spanned by
    // the trailing right singular vectors.
    for (std::size_t c = 0; c < group.size(); ++c) {
      W.col(group[c]) = V.col(size - 1 - static_cast<int>(c));
    }
  }
  for (int c = 0; c < size; ++c) W.col(c).normalize();

  std::vector<int> order(size);
  std::iota(order.begin(), order.end(), 0);
  const Complex I(0.0, 1.0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const Complex wa = I * lambda[a], wb = I * lambda[b];
    if (wa.real() != wb.real()) return wa.real() < wb.real();
    return wa.imag() < wb.imag();
  });
  result.modes.resize(size);
  result.eigenvectors.resize(size, size);
  Eigen::VectorXcd lambda_sorted(size);
  for (int m = 0; m < size; ++m) {
    lambda_sorted[m] = lambda[order[m]];
    result.modes[m] = I * lambda[order[m]];
    result.eigenvectors.col(m) = W.col(order[m]);
  }
  const Eigen::MatrixXcd& Ws = result.eigenvectors;

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Ws);
  const auto& sigma = svd.singularValues();
  const double smin = sigma[size - 1];
  result.kappa = smin > 0.0 ? sigma[0] / smin : std::numeric_limits<double>::infinity();
  result.ill_conditioned = !(result.kappa <= options.ill_conditioned_kappa);

  // W Lambda W^-1 through an LU solve: X W = W Lambda.
  const Eigen::MatrixXcd WL = Ws * lambda_sorted.asDiagonal();
  const Eigen::MatrixXcd X =
      Ws.transpose().partialPivLu().solve(WL.transpose()).transpose();
  result.residual = q_norm > 0.0 ? (Q - X).norm() / q_norm : (Q - X).norm();
  if (!std::isfinite(result.residual)) {
    result.residual = std::numeric_limits<double>::infinity();
    result.ill_conditioned = true;
  }

  const Eigen::VectorXcd samples = plane_wave_samples(symbol, options.origin);
  result.beta = Ws.completeOrthogonalDecomposition().solve(samples);
  Eigen::Index best = 0;
  result.beta.cwiseAbs().maxCoeff(&best);
  result.physical_index = static_cast<int>(best);

  result.k = symbol.probe.k;
  result.scale = normalization_factor(symbol.probe, symbol.stencil, symbol.scheme.order);
  result.k_hat = result.scale * symbol.probe.k;
  return result;
}

double normalization_factor(const WaveProbe& probe, const StretchedStencil& stencil,
                            int order) {
  const auto velocity = probe.velocity(stencil.dim);
  double largest = 0.0, sum = 0.0;
  for (int dir = 0; dir < stencil.dim; ++dir) {
    largest = std::max(largest, std::abs(velocity[dir]));
    const double term = stencil.spacing[dir] * velocity[dir] / stencil.expansion[dir];
    sum += term * term;
  }
  return largest * std::sqrt(sum) / (order + 1.0);
}

double normalize_wavenumber(double k, const WaveProbe& probe,
                            const StretchedStencil& stencil, int order) {
  return k * normalization_factor(probe, stencil, order);
}

double nyquist_wavenumber(const WaveProbe& probe, const StretchedStencil& stencil,
                          int order) {
  return std::numbers::pi / normalization_factor(probe, stencil, order);
}

std::vector<int> match_modes(std::span<const Complex> prediction,
                             std::span<const Complex> next) {
  const int n = static_cast<int>(prediction.size());
  if (static_cast<int>(next.size()) != n) {
    throw InvalidInput("mode sets to match differ in size");
  }
  struct Pair {
    double distance;
    int from, to;
  };
  std::vector<Pair> pairs;
  pairs.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) pairs.push_back({std::abs(prediction[i] - next[j]), i, j});
  }
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const Pair& a, const Pair& b) { return a.distance < b.distance; });
  std::vector<int> assignment(n, -1);
  std::vector<bool> taken(n, false);
  for (const Pair& pair : pairs) {
    if (assignment[pair.from] >= 0 || taken[pair.to]) continue;
    assignment[pair.from] = pair.to;
    taken[pair.to] = true;
  }
  auto dist = [&](int i, int j) { return std::abs(prediction[i] - next[j]); };
  for (int sweep = 0; sweep < n * n; ++sweep) {
    bool improved = false;
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        const double now = dist(a, assignment[a]) + dist(b, assignment[b]);
        const double swapped = dist(a, assignment[b]) + dist(b, assignment[a]);
        if (swapped < now * (1.0 - 1e-14)) {
          std::swap(assignment[a], assignment[b]);
          improved = true;
        }
      }
    }
    if (!improved) break;
  }
  return assignment;
}

BranchTrack physical_mode_select(std::span<const std::vector<Complex>> modes,
                                 std::span<const double> k, double ambiguity_tol) {
  if (modes.size() != k.size()) throw InvalidInput("modes and wavenumbers differ in length");
  BranchTrack track;
  if (modes.empty()) return track;
  for (std::size_t s = 1; s < k.size(); ++s) {
    if (!(k[s] > k[s - 1])) throw InvalidInput("wavenumber sweep must be strictly ascending");
  }
  const std::size_t n = modes[0].size();
  for (const auto& set : modes) {
    if (set.size() != n || n == 0) throw InvalidInput("mode sets differ in size");
  }

  // Ambiguity: a second mode, distinct from the chosen one, about as close
  // to the predicted branch position.
  auto check = [&](std::size_t sample, const Complex& target, int chosen) {
    const auto& set = modes[sample];
    const double best = std::abs(set[chosen] - target);
    const double scale = std::max({1.0, std::abs(target), best});
    for (std::size_t m = 0; m < n; ++m) {
      if (static_cast<int>(m) == chosen) continue;
      if (std::abs(set[m] - set[chosen]) <= ambiguity_tol * scale) continue;  // same value
      if (std::abs(set[m] - target) - best <= ambiguity_tol * scale) {
        track.ambiguous.push_back(sample);
        return;
      }
    }
  };

  // First sample: closest to the exact dispersion relation omega = k.
  int current = 0;
  {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < n; ++m) {
      const double d = std::abs(modes[0][m] - Complex(k[0], 0.0));
      if (d < best) {
        best = d;
        current = static_cast<int>(m);
      }
    }
    check(0, Complex(k[0], 0.0), current);
  }
  track.index.push_back(current);
  track.omega.push_back(modes[0][current]);

  // branches[b] is the index in the current sample of branch b.
  std::vector<int> branches(n);
  std::iota(branches.begin(), branches.end(), 0);
  int physical_branch = current;
  std::vector<Complex> previous;
  for (std::size_t s = 1; s < k.size(); ++s) {
    std::vector<Complex> prediction(n);
    for (std::size_t b = 0; b < n; ++b) {
      const Complex now = modes[s - 1][branches[b]];
      if (s >= 2) {
        const double ratio = (k[s] - k[s - 1]) / (k[s - 1] - k[s - 2]);
        prediction[b] = now + ratio * (now - previous[b]);
      } else {
        prediction[b] = now;
      }
    }
    const std::vector<int> assignment = match_modes(prediction, modes[s]);
    previous.assign(n, Complex());
    for (std::size_t b = 0; b < n; ++b) previous[b] = modes[s - 1][branches[b]];
    for (std::size_t b = 0; b < n; ++b) branches[b] = assignment[b];
    current = branches[physical_branch];
    check(s, prediction[physical_branch], current);
    track.index.push_back(current);
    track.omega.push_back(modes[s][current]);
  }
  return track;
}

ModeSweep sweep_modes(const FrDiscretization& disc, const StretchedStencil& stencil,
                      double theta, double phi, std::span<const double> k_values,
                      const SpectrumOptions& options) {
  ModeSweep sweep;
  std::vector<std::vector<Complex>> modes;
  sweep.spectra.reserve(k_values.size());
  for (double k : k_values) {
    sweep.spectra.push_back(analyze(disc.symbol(stencil, {k, theta, phi}), options));
    modes.push_back(sweep.spectra.back().modes);
  }
  sweep.track = physical_mode_select(modes, k_values);
  return sweep;
}

}  // namespace frvn

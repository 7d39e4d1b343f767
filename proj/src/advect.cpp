#include "frvn/advect.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "frvn/error.hpp"
#include "frvn/spectrum.hpp"

namespace frvn {

namespace {

constexpr double kBlowUp = 1e10;

}  // namespace

PeriodicGrid PeriodicGrid::uniform(int dim, int cells, double extent) {
  PeriodicGrid grid;
  grid.dim = dim;
  for (int dir = 0; dir < dim && dir < 2; ++dir) {
    grid.widths[dir].assign(cells, extent / cells);
  }
  grid.validate();
  return grid;
}

PeriodicGrid PeriodicGrid::uniform_2d(std::array<int, 2> cells,
                                      std::array<double, 2> extent) {
  PeriodicGrid grid;
  grid.dim = 2;
  for (int dir = 0; dir < 2; ++dir) {
    grid.widths[dir].assign(cells[dir], extent[dir] / cells[dir]);
  }
  grid.validate();
  return grid;
}

PeriodicGrid PeriodicGrid::mirrored_geometric(int cells, double extent, double expansion) {
  if (cells < 4 || cells % 2 != 0) {
    throw InvalidInput("mirrored geometric grid needs an even cell count >= 4");
  }
  if (!(expansion > 0.0)) throw InvalidInput("expansion factor must be positive");
  std::vector<double> widths(cells);
  const int half = cells / 2;
  for (int i = 0; i < half; ++i) {
    widths[i] = std::pow(expansion, i);
    widths[cells - 1 - i] = widths[i];
  }
  const double total = std::accumulate(widths.begin(), widths.end(), 0.0);
  for (double& w : widths) w *= extent / total;
  return from_widths(std::move(widths));
}

PeriodicGrid PeriodicGrid::from_widths(std::vector<double> x, std::vector<double> y) {
  PeriodicGrid grid;
  grid.dim = y.empty() ? 1 : 2;
  grid.widths[0] = std::move(x);
  grid.widths[1] = std::move(y);
  grid.validate();
  return grid;
}

int PeriodicGrid::cell_count() const {
  return dim == 1 ? cells(0) : cells(0) * cells(1);
}

double PeriodicGrid::extent(int dir) const {
  return std::accumulate(widths[dir].begin(), widths[dir].end(), 0.0);
}

double PeriodicGrid::lower_edge(int dir, int index) const {
  return std::accumulate(widths[dir].begin(), widths[dir].begin() + index, 0.0);
}

void PeriodicGrid::validate() const {
  if (dim != 1 && dim != 2) throw InvalidInput("time-domain grids are 1D or 2D");
  for (int dir = 0; dir < dim; ++dir) {
    if (cells(dir) < 4) throw InvalidInput("periodic grids need at least 4 cells per direction");
    for (double w : widths[dir]) {
      if (!std::isfinite(w) || w <= 0.0) throw InvalidInput("cell widths must be positive");
    }
  }
}

AdvectionSolver::AdvectionSolver(const SchemeConfig& scheme, PeriodicGrid grid,
                                 double theta, MetricForm metric)
    : disc_(scheme),
      grid_(std::move(grid)),
      velocity_(WaveProbe{0.0, theta, 0.0}.velocity(scheme.dim)),
      metric_(metric),
      points_(make_points(scheme.order, scheme.rule)) {
  grid_.validate();
  if (scheme.dim != grid_.dim) throw InvalidInput("scheme and grid dimensionality differ");
  if (scheme.dim == 1 && theta != 0.0) throw InvalidInput("1D advection needs theta = 0");
  const int n = scheme.order + 1;
  node_weights_.resize(nodes_per_cell());
  for (int idx = 0; idx < nodes_per_cell(); ++idx) {
    double w = points_.weights[idx % n];
    if (scheme.dim == 2) w *= points_.weights[idx / n];
    node_weights_[idx] = w;
  }
}

FieldState AdvectionSolver::zeros() const {
  return {Eigen::MatrixXcd::Zero(nodes_per_cell(), grid_.cell_count()), 0.0};
}

std::array<double, 2> AdvectionSolver::node_position(int cell, int node) const {
  const int n = scheme().order + 1;
  const int ix = cell % grid_.cells(0);
  double x = grid_.lower_edge(0, ix) + 0.5 * (points_.nodes[node % n] + 1.0) * grid_.widths[0][ix];
  double y = 0.0;
  if (grid_.dim == 2) {
    const int iy = cell / grid_.cells(0);
    y = grid_.lower_edge(1, iy) + 0.5 * (points_.nodes[node / n] + 1.0) * grid_.widths[1][iy];
  }
  return {x, y};
}

FieldState AdvectionSolver::sample(const std::function<Complex(double, double)>& f) const {
  FieldState state = zeros();
  for (int c = 0; c < grid_.cell_count(); ++c) {
    for (int node = 0; node < nodes_per_cell(); ++node) {
      const auto [x, y] = node_position(c, node);
      state.values(node, c) = f(x, y);
    }
  }
  return state;
}

FieldState AdvectionSolver::bloch_mode(const Eigen::VectorXcd& cell_vector, double k) const {
  if (cell_vector.size() != nodes_per_cell()) {
    throw InvalidInput("Bloch cell vector has the wrong length");
  }
  FieldState state = zeros();
  for (int c = 0; c < grid_.cell_count(); ++c) {
    double phase = velocity_[0] * grid_.lower_edge(0, c % grid_.cells(0));
    if (grid_.dim == 2) phase += velocity_[1] * grid_.lower_edge(1, c / grid_.cells(0));
    state.values.col(c) = cell_vector * std::exp(Complex(0.0, k * phase));
  }
  return state;
}

int AdvectionSolver::neighbor(int cell, int dir, int offset) const {
  const int nx = grid_.cells(0);
  int ix = cell % nx;
  int iy = cell / nx;
  if (dir == 0) {
    ix = (ix + offset + nx) % nx;
  } else {
    const int ny = grid_.cells(1);
    iy = (iy + offset + ny) % ny;
  }
  return ix + nx * iy;
}

double AdvectionSolver::jacobian(int cell) const {
  double j = 0.5 * grid_.widths[0][cell % grid_.cells(0)];
  if (grid_.dim == 2) j *= 0.5 * grid_.widths[1][cell / grid_.cells(0)];
  return j;
}

FieldState AdvectionSolver::rhs(const FieldState& state) const {
  if (state.values.rows() != nodes_per_cell() || state.values.cols() != grid_.cell_count()) {
    throw InvalidInput("field state does not match the solver layout");
  }
  FieldState out{Eigen::MatrixXcd::Zero(state.values.rows(), state.values.cols()), state.time};
  const int nx = grid_.cells(0);
  for (int dir = 0; dir < grid_.dim; ++dir) {
    const double v = velocity_[dir];
    if (v == 0.0) continue;
    const DirectionBlocks& C = disc_.blocks().lifted[dir];
    Eigen::MatrixXcd up(state.values.rows(), state.values.cols());
    Eigen::MatrixXcd down(state.values.rows(), state.values.cols());
    for (int c = 0; c < grid_.cell_count(); ++c) {
      up.col(c) = state.values.col(neighbor(c, dir, -1));
      down.col(c) = state.values.col(neighbor(c, dir, +1));
    }
    const Eigen::MatrixXcd from_up = C.minus * up;
    const Eigen::MatrixXcd from_centre = C.zero * state.values;
    const Eigen::MatrixXcd from_down = C.plus * down;
    const int n = grid_.cells(dir);
    for (int c = 0; c < grid_.cell_count(); ++c) {
      const int index = dir == 0 ? c % nx : c / nx;
      const double w = grid_.widths[dir][index];
      if (metric_ == MetricForm::Physical) {
        out.values.col(c) -= (v * 2.0 / w) * (from_up.col(c) + from_centre.col(c) +
                                              from_down.col(c));
      } else {
        const double w_up = grid_.widths[dir][(index + n - 1) % n];
        const double w_down = grid_.widths[dir][(index + 1) % n];
        out.values.col(c) -= v * ((2.0 / w_up) * from_up.col(c) +
                                  (2.0 / w) * from_centre.col(c) +
                                  (2.0 / w_down) * from_down.col(c));
      }
    }
  }
  return out;
}

FieldState AdvectionSolver::step(const FieldState& state, const RkScheme& rk, double tau,
                                 std::size_t step_index) const {
  if (!(tau > 0.0)) throw InvalidInput("time step tau must be positive");
  const auto& c = rk.coefficients();
  FieldState acc{c.back() * state.values, state.time};
  for (int m = rk.stages() - 1; m >= 0; --m) {
    const FieldState derivative = rhs(acc);
    acc.values = c[m] * state.values + tau * derivative.values;
  }
  acc.time = state.time + tau;
  const double largest = acc.values.cwiseAbs().maxCoeff();
  if (!std::isfinite(largest) || largest > kBlowUp) throw DivergenceError(step_index, largest);
  return acc;
}

double AdvectionSolver::energy(const FieldState& state) const {
  double total = 0.0;
  for (int c = 0; c < grid_.cell_count(); ++c) {
    total += jacobian(c) * node_weights_.dot(state.values.col(c).cwiseAbs2());
  }
  return total;
}

Complex AdvectionSolver::integral(const FieldState& state) const {
  Complex total(0.0, 0.0);
  for (int c = 0; c < grid_.cell_count(); ++c) {
    total += jacobian(c) * (node_weights_.cast<Complex>().transpose() * state.values.col(c))(0);
  }
  return total;
}

double AdvectionSolver::l2_error(const FieldState& state,
                                 const std::function<Complex(double, double)>& f) const {
  const FieldState exact = sample(f);
  FieldState diff{state.values - exact.values, state.time};
  return std::sqrt(energy(diff));
}

void AdvectionSolver::dump(std::ostream& out, const FieldState& state) const {
  out << "# FR advection state: time " << state.time << ", order " << scheme().order
      << ", dim " << grid_.dim << "\n# cell x y re im\n";
  out.precision(17);
  for (int c = 0; c < grid_.cell_count(); ++c) {
    for (int node = 0; node < nodes_per_cell(); ++node) {
      const auto [x, y] = node_position(c, node);
      const Complex u = state.values(node, c);
      out << c << ' ' << x << ' ' << y << ' ' << u.real() << ' ' << u.imag() << '\n';
    }
  }
}

double fit_log_slope(std::span<const double> times, std::span<const double> values) {
  if (times.size() != values.size() || times.size() < 2) {
    throw InvalidInput("slope fit needs at least two matching samples");
  }
  const double n = static_cast<double>(times.size());
  const double t_mean = std::accumulate(times.begin(), times.end(), 0.0) / n;
  double y_mean = 0.0;
  for (double v : values) y_mean += std::log(v);
  y_mean /= n;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    num += (times[i] - t_mean) * (std::log(values[i]) - y_mean);
    den += (times[i] - t_mean) * (times[i] - t_mean);
  }
  return num / den;
}

ModeComparison compare_with_spectrum(const SchemeConfig& scheme, double theta,
                                     double k_hat_target,
                                     const ModeComparisonOptions& options) {
  scheme.validate();
  if (scheme.dim > 2) throw InvalidInput("time-domain comparison supports 1D and 2D");
  if (!(k_hat_target > 0.0)) throw InvalidInput("target k_hat must be positive");

  // Cell widths chosen so that the plane wave is periodic on an N x N grid
  // with the same number of wavelengths in both directions.
  StretchedStencil stencil = StretchedStencil::uniform(scheme.dim);
  const double c = std::cos(theta), s = std::sin(theta);
  if (scheme.dim == 2 && s > 0.0) {
    if (theta < std::numbers::pi / 4.0) {
      stencil.spacing[1] = c / s;
    } else {
      stencil.spacing[0] = s / c;
    }
  }
  const int N = options.cells;
  const double period = scheme.dim == 1 ? N * stencil.spacing[0]
                                        : N * std::max(stencil.spacing[0] * c,
                                                       stencil.spacing[1] * s);
  const WaveProbe angles{0.0, theta, 0.0};
  const double factor = normalization_factor(angles, stencil, scheme.order);
  const double wavelengths =
      std::max(1.0, std::round(k_hat_target / factor * period / (2.0 * std::numbers::pi)));

  ModeComparison report;
  report.k = 2.0 * std::numbers::pi * wavelengths / period;
  report.k_hat = factor * report.k;

  const FrDiscretization disc(scheme);
  const SemiDiscreteSymbol symbol = disc.symbol(stencil, {report.k, theta, 0.0});
  const SpectrumResult spectrum = analyze(symbol);
  const int phys = spectrum.physical_index;
  const Eigen::VectorXcd cell_vector = spectrum.eigenvectors.col(phys) * spectrum.beta[phys];
  const Complex omega = spectrum.modes[phys];
  const Complex mu(omega.imag(), -omega.real());  // eigenvalue of Q: -i omega
  report.predicted_rate = 2.0 * omega.imag();

  const RkScheme& rk = options.rk;
  auto discrete_rate = [&](double tau) {
    return 2.0 * std::log(std::abs(rk.amplification(tau * mu))) / tau;
  };
  auto stable = [&](double tau) {
    for (const Complex& w : spectrum.modes) {
      if (std::abs(rk.amplification(tau * Complex(w.imag(), -w.real()))) > 1.0 + 1e-12 &&
          w.imag() <= 0.0) {
        return false;
      }
    }
    return true;
  };
  const double target_error =
      1e-2 * options.tolerance * std::abs(report.predicted_rate) + 1e-2 * options.absolute_floor;
  double tau = 0.5 * std::min(stencil.spacing[0], stencil.spacing[scheme.dim - 1]) /
               ((scheme.order + 1.0) * (scheme.order + 1.0));
  for (int it = 0; it < 200; ++it) {
    if (stable(tau) && std::abs(discrete_rate(tau) - report.predicted_rate) <= target_error) break;
    tau *= 0.5;
  }
  report.tau = tau;
  report.fully_discrete_rate = discrete_rate(tau);

  // Long enough that round-off in the energy stays well below the rate tolerance.
  const double resolution =
      options.tolerance * std::abs(report.predicted_rate) + options.absolute_floor;
  const double wanted = 1e-13 / (resolution * tau);
  const std::size_t steps =
      std::max(options.min_steps, static_cast<std::size_t>(std::min(wanted, 1e6)));
  report.steps = steps;

  PeriodicGrid grid = scheme.dim == 1
                          ? PeriodicGrid::uniform(1, N, N * stencil.spacing[0])
                          : PeriodicGrid::uniform_2d({N, N}, {N * stencil.spacing[0],
                                                              N * stencil.spacing[1]});
  const AdvectionSolver solver(scheme, std::move(grid), theta);
  FieldState state = solver.bloch_mode(cell_vector, report.k);
  std::vector<double> times{0.0}, energies{solver.energy(state)};
  const std::size_t stride = std::max<std::size_t>(1, steps / 200);
  for (std::size_t n = 1; n <= steps; ++n) {
    state = solver.step(state, rk, tau, n);
    if (n % stride == 0 || n == steps) {
      times.push_back(state.time);
      energies.push_back(solver.energy(state));
    }
  }
  report.measured_rate = fit_log_slope(times, energies);
  const double error = std::abs(report.measured_rate - report.predicted_rate);
  report.relative_error = report.predicted_rate != 0.0
                              ? error / std::abs(report.predicted_rate)
                              : error;
  report.passed = error <= options.tolerance * std::abs(report.predicted_rate) +
                               options.absolute_floor;
  return report;
}

}  // namespace frvn

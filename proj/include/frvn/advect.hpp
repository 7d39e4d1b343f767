#ifndef FRVN_ADVECT_HPP_
#define FRVN_ADVECT_HPP_

#include <array>
#include <cstddef>
#include <functional>
#include <ostream>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "frvn/operator.hpp"
#include "frvn/temporal.hpp"

namespace frvn {

/// Periodic rectilinear grid in 1D or 2D described by per-direction cell
/// widths. Cell (ix, iy) has linear index ix + nx * iy.
struct PeriodicGrid {
  int dim = 1;
  std::array<std::vector<double>, 2> widths;

  static PeriodicGrid uniform(int dim, int cells, double extent);
  static PeriodicGrid uniform_2d(std::array<int, 2> cells, std::array<double, 2> extent);
  /// Geometric expansion by `expansion` over the first half of the cells and
  /// the mirrored contraction over the second half, so the domain closes.
  /// `cells` must be even.
  static PeriodicGrid mirrored_geometric(int cells, double extent, double expansion);
  static PeriodicGrid from_widths(std::vector<double> x, std::vector<double> y = {});

  int cells(int dir) const { return static_cast<int>(widths[dir].size()); }
  int cell_count() const;
  double extent(int dir) const;
  double lower_edge(int dir, int index) const;

  /// dim in {1, 2}, at least 4 cells per direction, positive finite widths.
  void validate() const;
};

/// Nodal solution: column c holds the (p+1)^d solution-point values of cell c.
struct FieldState {
  Eigen::MatrixXcd values;
  double time = 0.0;
};

/// How the update of a cell is scaled by cell widths.
///   Physical: every term divided by the cell's own Jacobian. Preserves a
///             constant state on any grid.
///   Neighbor: each coupling block carries the Jacobian of the cell it reads
///             from, exactly as in the von Neumann symbol. On a stretched grid
///             a constant state grows where the grid expands.
enum class MetricForm { Physical, Neighbor };

/// Time-domain FR discretization of u_t + a . grad u = 0 on a periodic grid,
/// sharing its coupling blocks with the spectral analysis. The common
/// interface flux is the alpha-weighted upwind/central blend.
///
/// With a linear homogeneous flux the DG correction reproduces nodal DG.
class AdvectionSolver {
 public:
  AdvectionSolver(const SchemeConfig& scheme, PeriodicGrid grid, double theta = 0.0,
                  MetricForm metric = MetricForm::Physical);

  const SchemeConfig& scheme() const { return disc_.scheme(); }
  const PeriodicGrid& grid() const { return grid_; }
  const std::array<double, 3>& velocity() const { return velocity_; }
  int nodes_per_cell() const { return disc_.scheme().nodes_per_cell(); }
  MetricForm metric() const { return metric_; }

  FieldState zeros() const;

  /// Physical coordinate of solution point `node` of cell `cell`.
  std::array<double, 2> node_position(int cell, int node) const;

  /// Samples f at every solution point.
  FieldState sample(const std::function<Complex(double, double)>& f) const;

  /// Bloch mode: cell vector v repeated with phase exp(i k a . x_lower).
  FieldState bloch_mode(const Eigen::VectorXcd& cell_vector, double k) const;

  FieldState rhs(const FieldState& state) const;

  /// One step of the stability polynomial, u <- R(tau L) u in Horner form.
  /// Throws DivergenceError carrying `step_index` if max |u| exceeds 1e10.
  FieldState step(const FieldState& state, const RkScheme& rk, double tau,
                  std::size_t step_index = 0) const;

  /// sum over cells of J * sum_nodes w |u|^2
  double energy(const FieldState& state) const;
  /// sum over cells of J * sum_nodes w u
  Complex integral(const FieldState& state) const;
  /// Quadrature L2 error against f.
  double l2_error(const FieldState& state,
                  const std::function<Complex(double, double)>& f) const;

  /// Columnar dump: "cell x y re im", one line per solution point.
  void dump(std::ostream& out, const FieldState& state) const;

 private:
  int neighbor(int cell, int dir, int offset) const;
  double jacobian(int cell) const;

  FrDiscretization disc_;
  PeriodicGrid grid_;
  std::array<double, 3> velocity_;
  MetricForm metric_;
  PointSet points_;
  Eigen::VectorXd node_weights_;  // tensor quadrature weights on the reference cell
};

/// Least-squares slope of log(values) against times.
double fit_log_slope(std::span<const double> times, std::span<const double> values);

/// Time-domain growth rate of the physical mode against the eigenanalysis.
struct ModeComparison {
  double k = 0.0;
  double k_hat = 0.0;
  double tau = 0.0;
  std::size_t steps = 0;
  double measured_rate = 0.0;       // d log(energy) / dt from the solver
  double predicted_rate = 0.0;      // 2 Im(omega) of the semi-discrete mode
  double fully_discrete_rate = 0.0; // 2 Im(omega) after time discretization
  double relative_error = 0.0;      // |measured - predicted| / |predicted|
  bool passed = false;
};

struct ModeComparisonOptions {
  int cells = 16;               // per direction
  std::size_t min_steps = 100;
  double tolerance = 1e-6;      // relative, on the rate
  double absolute_floor = 1e-12;  // for energy-neutral modes (Im omega = 0)
  RkScheme rk = RkScheme(RkKind::RK44);
};

/// Marches the physical eigenmode (the plane wave projected onto it through
/// beta) on a uniform periodic grid whose cells are sized so the wave is
/// periodic, fits the energy decay rate and compares it with 2 Im(omega).
/// The wavenumber is the periodic one closest to k_hat_target. The time step
/// is reduced until the time-discretization error of the rate is below
/// 1e-2 * tolerance, and the run is long enough for round-off in the energy
/// to stay well below the tolerance on the rate.
ModeComparison compare_with_spectrum(const SchemeConfig& scheme, double theta,
                                     double k_hat_target,
                                     const ModeComparisonOptions& options = {});

}  // namespace frvn

#endif  // FRVN_ADVECT_HPP_

#ifndef FRVN_OPERATOR_HPP_
#define FRVN_OPERATOR_HPP_

#include <array>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "frvn/basis.hpp"

namespace frvn {

using Complex = std::complex<double>;

/// Rectilinear neighborhood of one cell. In direction i the central cell has
/// width spacing[i]; the upstream neighbor has width spacing[i] / expansion[i]
/// and the downstream neighbor spacing[i] * expansion[i].
struct StretchedStencil {
  int dim = 1;
  std::array<double, 3> spacing{1.0, 1.0, 1.0};
  std::array<double, 3> expansion{1.0, 1.0, 1.0};

  static StretchedStencil uniform(int dim, double spacing = 1.0);

  double upstream_width(int dir) const { return spacing[dir] / expansion[dir]; }
  double downstream_width(int dir) const { return spacing[dir] * expansion[dir]; }

  /// Throws InvalidInput unless 1 <= dim <= 3 and every used entry is finite
  /// and positive.
  void validate() const;
};

/// Polynomial order, correction family, upwinding ratio and dimensionality.
/// alpha = 1 is fully upwind, alpha = 0.5 central.
struct SchemeConfig {
  int order = 1;
  CorrectionFamily family = CorrectionFamily::dg(1);
  double alpha = 1.0;
  int dim = 1;
  PointRule rule = PointRule::GaussLegendre;

  SchemeConfig() = default;
  SchemeConfig(CorrectionFamily family_, double alpha_, int dim_,
               PointRule rule_ = PointRule::GaussLegendre)
      : order(family_.order()), family(family_), alpha(alpha_), dim(dim_), rule(rule_) {}

  int nodes_per_cell() const;
  void validate() const;
};

/// Trial plane wave exp(i k (a x + b y + c z - t)). theta is the azimuthal
/// angle in the x-y plane and phi the elevation out of it; both in radians.
struct WaveProbe {
  double k = 0.0;
  double theta = 0.0;
  double phi = 0.0;

  /// Unit advection velocity (cos phi cos theta, cos phi sin theta, sin phi)
  /// restricted to the first `dim` components. In 1D the velocity is 1.
  std::array<double, 3> velocity(int dim) const;
};

/// One-directional coupling blocks acting on upstream, central and
/// downstream cells.
struct DirectionBlocks {
  Eigen::MatrixXd minus;  // alpha hL lR^T
  Eigen::MatrixXd zero;   // D - alpha hL lL^T - (1 - alpha) hR lR^T
  Eigen::MatrixXd plus;   // (1 - alpha) hR lL^T
};

/// Solution vectors are ordered lexicographically with xi fastest, then eta,
/// then zeta. The xi-direction lift of a 1D block C is I (x) ... (x) C (the
/// right Kronecker factor acts on the fastest index).
struct FrBlocks {
  int dim = 1;
  int order = 0;
  DirectionBlocks local;                // 1D blocks
  std::vector<DirectionBlocks> lifted;  // one per direction
};

FrBlocks build_blocks(const SchemeConfig& scheme, const BasisOperators& basis);

/// Kronecker lift of a 1D operator onto direction `dir` of a `dim`-cube.
Eigen::MatrixXd lift(const Eigen::MatrixXd& block, int dir, int dim);

struct SemiDiscreteSymbol {
  Eigen::MatrixXcd Q;
  WaveProbe probe;
  StretchedStencil stencil;
  SchemeConfig scheme;
};

/// du/dt = Q u for the Bloch wave sampled on the central cell:
///
///   Q = -sum_i v_i [ (2/w_up) C- e^{-i k v_i w_up} + (2/w_c) C0
///                    + (2/w_down) C+ e^{+i k v_i w_c} ]
///
/// with w_up, w_c, w_down the upstream, central and downstream widths in
/// direction i. Each block carries the reference-to-physical metric of the
/// cell it reads from; every direction is scaled by its own metric.
SemiDiscreteSymbol assemble_symbol(const SchemeConfig& scheme,
                                   const StretchedStencil& stencil,
                                   const WaveProbe& probe, const FrBlocks& blocks);

/// Basis and blocks built once for a scheme; symbols for many probes and
/// stencils can then be assembled concurrently.
class FrDiscretization {
 public:
  explicit FrDiscretization(const SchemeConfig& scheme);

  const SchemeConfig& scheme() const { return scheme_; }
  const BasisOperators& basis() const { return basis_; }
  const FrBlocks& blocks() const { return blocks_; }

  SemiDiscreteSymbol symbol(const StretchedStencil& stencil,
                            const WaveProbe& probe) const {
    return assemble_symbol(scheme_, stencil, probe, blocks_);
  }

 private:
  SchemeConfig scheme_;
  BasisOperators basis_;
  FrBlocks blocks_;
};

}  // namespace frvn

#endif  // FRVN_OPERATOR_HPP_

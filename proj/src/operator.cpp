#include "frvn/operator.hpp"

#include <cmath>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

#include "frvn/error.hpp"

namespace frvn {

namespace {

int int_pow(int base, int exponent) {
  int value = 1;
  for (int i = 0; i < exponent; ++i) value *= base;
  return value;
}

}  // namespace

StretchedStencil StretchedStencil::uniform(int dim, double spacing) {
  StretchedStencil stencil;
  stencil.dim = dim;
  stencil.spacing = {spacing, spacing, spacing};
  return stencil;
}

void StretchedStencil::validate() const {
  if (dim < 1 || dim > 3) throw InvalidInput("stencil dimensionality must be 1, 2 or 3");
  for (int i = 0; i < dim; ++i) {
    if (!std::isfinite(spacing[i]) || spacing[i] <= 0.0) {
      throw InvalidInput("grid spacing must be finite and positive");
    }
    if (!std::isfinite(expansion[i]) || expansion[i] <= 0.0) {
      throw InvalidInput("expansion factor must be finite and positive");
    }
  }
}

int SchemeConfig::nodes_per_cell() const { return int_pow(order + 1, dim); }

void SchemeConfig::validate() const {
  if (order < 0) throw InvalidInput("polynomial order must be non-negative");
  if (family.order() != order) {
    throw InvalidInput("correction family order does not match scheme order");
  }
  if (dim < 1 || dim > 3) throw InvalidInput("dimensionality must be 1, 2 or 3");
  if (!(alpha >= 0.5 && alpha <= 1.0)) {
    throw InvalidInput("upwinding ratio alpha must lie in [0.5, 1], got " +
                       std::to_string(alpha));
  }
}

std::array<double, 3> WaveProbe::velocity(int dim) const {
  switch (dim) {
    case 1:
      return {1.0, 0.0, 0.0};
    case 2:
      return {std::cos(theta), std::sin(theta), 0.0};
    default:
      return {std::cos(phi) * std::cos(theta), std::cos(phi) * std::sin(theta),
              std::sin(phi)};
  }
}

Eigen::MatrixXd lift(const Eigen::MatrixXd& block, int dir, int dim) {
  const int n = static_cast<int>(block.rows());
  const Eigen::MatrixXd slow = Eigen::MatrixXd::Identity(int_pow(n, dim - 1 - dir),
                                                         int_pow(n, dim - 1 - dir));
  const Eigen::MatrixXd fast =
      Eigen::MatrixXd::Identity(int_pow(n, dir), int_pow(n, dir));
  const Eigen::MatrixXd inner = Eigen::kroneckerProduct(block, fast);
  return Eigen::kroneckerProduct(slow, inner);
}

FrBlocks build_blocks(const SchemeConfig& scheme, const BasisOperators& basis) {
  scheme.validate();
  const int n = scheme.order + 1;
  if (basis.D.rows() != n || basis.hL.size() != n || basis.lL.size() != n) {
    throw InvalidInput("basis operators do not match the scheme order");
  }
  const double alpha = scheme.alpha;
  FrBlocks blocks;
  blocks.dim = scheme.dim;
  blocks.order = scheme.order;
  blocks.local.minus = alpha * basis.hL * basis.lR.transpose();
  blocks.local.plus = (1.0 - alpha) * basis.hR * basis.lL.transpose();
  blocks.local.zero = basis.D - alpha * basis.hL * basis.lL.transpose() -
                      (1.0 - alpha) * basis.hR * basis.lR.transpose();
  for (int dir = 0; dir < scheme.dim; ++dir) {
    blocks.lifted.push_back({lift(blocks.local.minus, dir, scheme.dim),
                             lift(blocks.local.zero, dir, scheme.dim),
                             lift(blocks.local.plus, dir, scheme.dim)});
  }
  return blocks;
}

SemiDiscreteSymbol assemble_symbol(const SchemeConfig& scheme,
                                   const StretchedStencil& stencil,
                                   const WaveProbe& probe, const FrBlocks& blocks) {
  scheme.validate();
  stencil.validate();
  if (stencil.dim != scheme.dim || blocks.dim != scheme.dim ||
      blocks.order != scheme.order) {
    throw InvalidInput("scheme, stencil and blocks disagree on dimensionality or order");
  }
  if (!std::isfinite(probe.k) || !std::isfinite(probe.theta) || !std::isfinite(probe.phi)) {
    throw InvalidInput("wave probe must be finite");
  }
  if (scheme.dim == 1 && probe.theta != 0.0) {
    throw InvalidInput("1D probes must have theta = 0");
  }

  const int size = scheme.nodes_per_cell();
  const auto velocity = probe.velocity(scheme.dim);
  const Complex I(0.0, 1.0);
  Eigen::MatrixXcd Q = Eigen::MatrixXcd::Zero(size, size);
  for (int dir = 0; dir < scheme.dim; ++dir) {
    const double v = velocity[dir];
    if (v == 0.0) continue;
    const double w_up = stencil.upstream_width(dir);
    const double w_c = stencil.spacing[dir];
    const double w_down = stencil.downstream_width(dir);
    const Complex phase_up = std::exp(-I * probe.k * v * w_up);
    const Complex phase_down = std::exp(I * probe.k * v * w_c);
    const DirectionBlocks& C = blocks.lifted[dir];
    Q -= v * ((2.0 / w_up) * phase_up * C.minus.cast<Complex>() +
              (2.0 / w_c) * C.zero.cast<Complex>() +
              (2.0 / w_down) * phase_down * C.plus.cast<Complex>());
  }
  if (!Q.allFinite()) throw NumericalError("semi-discrete symbol is not finite");
  return {Q, probe, stencil, scheme};
}

FrDiscretization::FrDiscretization(const SchemeConfig& scheme)
    : scheme_(scheme),
      basis_(make_basis(scheme.family, make_points(scheme.order, scheme.rule))),
      blocks_(build_blocks(scheme, basis_)) {}

}  // namespace frvn

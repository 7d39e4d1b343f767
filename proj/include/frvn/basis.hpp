#ifndef FRVN_BASIS_HPP_
#define FRVN_BASIS_HPP_

#include <string>
#include <utility>

#include <Eigen/Dense>

namespace frvn {

enum class PointRule { GaussLegendre, GaussLobatto };

/// Solution points of one reference interval [-1, 1], ascending, together
/// with the weights of the quadrature rule they come from.
struct PointSet {
  int order = 0;
  PointRule rule = PointRule::GaussLegendre;
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;

  int size() const { return order + 1; }
};

/// Nodes of the (order+1)-point Gauss-Legendre or Gauss-Lobatto rule.
/// Throws InvalidInput for order < 0, or for Lobatto with order 0.
PointSet make_points(int order, PointRule rule = PointRule::GaussLegendre);

/// Legendre polynomial L_n(x) by the three-term recurrence.
double legendre(int n, double x);
/// dL_n/dx, valid on the closed interval including x = +-1.
double legendre_derivative(int n, double x);

/// Barycentric weights w_j = 1 / prod_{k != j} (x_j - x_k).
Eigen::VectorXd barycentric_weights(const PointSet& points);

/// Values of every Lagrange basis polynomial at xi (barycentric form).
Eigen::VectorXd lagrange_values(const PointSet& points, double xi);

/// D(i, j) = dl_j/dxi evaluated at node i.
Eigen::MatrixXd lagrange_derivative_matrix(const PointSet& points);

enum class CorrectionKind { DG, HuynhG2, OSFR };

/// Original-stable (VCJH) family of correction functions,
///
///   h_L(xi) = (-1)^p / 2 * [ L_p - (eta L_{p-1} + L_{p+1}) / (1 + eta) ],
///   h_R(xi) = h_L(-xi),
///
/// where eta = iota * (2p + 1) * (a_p p!)^2 / 2 and a_p = (2p)! / (2^p (p!)^2)
/// is the leading coefficient of L_p. The family parameter iota is exposed
/// directly: iota = 0 recovers nodal DG (h_L is the right Radau polynomial),
/// iota = iota_huynh(p) recovers Huynh's g2 correction. Values at or below
/// iota_min(p) (eta <= -1) leave the energy-stable family and are rejected.
///
/// For order 0 the correction is linear and only the DG member exists.
class CorrectionFamily {
 public:
  static CorrectionFamily dg(int order);
  static CorrectionFamily huynh(int order);
  static CorrectionFamily osfr(int order, double iota);

  CorrectionKind kind() const { return kind_; }
  int order() const { return order_; }
  double iota() const { return iota_; }
  double eta() const { return eta_; }
  std::string name() const;

  double left_value(double xi) const;
  double right_value(double xi) const { return left_value(-xi); }
  double left_derivative(double xi) const;
  double right_derivative(double xi) const { return -left_derivative(-xi); }

 private:
  CorrectionFamily(CorrectionKind kind, int order, double iota);

  CorrectionKind kind_;
  int order_;
  double iota_;
  double eta_;
};

double iota_dg(int order);
double iota_huynh(int order);
/// Lower bound of the stable family (eta = -1); the bound itself is excluded.
double iota_min(int order);

/// Lagrange and correction operators sampled at the solution points.
struct BasisOperators {
  PointSet points;
  Eigen::MatrixXd D;
  Eigen::VectorXd lL, lR;  // basis values at xi = -1 and xi = +1
  Eigen::VectorXd hL, hR;  // dh_L/dxi and dh_R/dxi at the nodes
};

/// (dh_L/dxi, dh_R/dxi) at the nodes.
std::pair<Eigen::VectorXd, Eigen::VectorXd> correction_derivatives(
    const CorrectionFamily& family, const PointSet& points);

BasisOperators make_basis(const CorrectionFamily& family,
                          const PointSet& points);

}  // namespace frvn

#endif  // FRVN_BASIS_HPP_

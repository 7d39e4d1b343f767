#include "frvn/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "frvn/error.hpp"

namespace frvn {

namespace {

constexpr int kMaxNewton = 100;

// (a_p p!)^2 with a_p = (2p)! / (2^p (p!)^2), i.e. ((2p)! / (2^p p!))^2.
double leading_coefficient_squared(int p) {
  double value = 1.0;  // (2p)! / (2^p p!) = 1 * 3 * 5 * ... * (2p - 1)
  for (int m = 1; m <= p; ++m) value *= 2.0 * m - 1.0;
  return value * value;
}

void legendre_with_derivative(int n, double x, double* value,
                              double* derivative) {
  if (n == 0) {
    *value = 1.0;
    *derivative = 0.0;
    return;
  }
  double p_prev = 1.0, p_curr = x;
  double d_prev = 0.0, d_curr = 1.0;
  for (int m = 1; m < n; ++m) {
    const double p_next = ((2.0 * m + 1.0) * x * p_curr - m * p_prev) / (m + 1.0);
    const double d_next = d_prev + (2.0 * m + 1.0) * p_curr;
    p_prev = p_curr;
    p_curr = p_next;
    d_prev = d_curr;
    d_curr = d_next;
  }
  *value = p_curr;
  *derivative = d_curr;
}

PointSet gauss_legendre(int order) {
  const int n = order + 1;
  PointSet points;
  points.order = order;
  points.rule = PointRule::GaussLegendre;
  points.nodes.resize(n);
  points.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = -std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double value = 0.0, derivative = 1.0;
    for (int it = 0; it < kMaxNewton; ++it) {
      legendre_with_derivative(n, x, &value, &derivative);
      const double dx = value / derivative;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre_with_derivative(n, x, &value, &derivative);
    points.nodes[i] = x;
    points.weights[i] = 2.0 / ((1.0 - x * x) * derivative * derivative);
  }
  // Enforce exact symmetry about the origin.
  for (int i = 0; i < n / 2; ++i) {
    const double x = 0.5 * (points.nodes[n - 1 - i] - points.nodes[i]);
    const double w = 0.5 * (points.weights[n - 1 - i] + points.weights[i]);
    points.nodes[i] = -x;
    points.nodes[n - 1 - i] = x;
    points.weights[i] = points.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) points.nodes[n / 2] = 0.0;
  return points;
}

PointSet gauss_lobatto(int order) {
  const int n = order + 1;
  PointSet points;
  points.order = order;
  points.rule = PointRule::GaussLobatto;
  points.nodes.resize(n);
  points.weights.resize(n);
  points.nodes[0] = -1.0;
  points.nodes[n - 1] = 1.0;
  // Interior nodes are the roots of L'_order.
  for (int i = 1; i < n - 1; ++i) {
    double x = -std::cos(std::numbers::pi * i / order);
    for (int it = 0; it < kMaxNewton; ++it) {
      double value = 0.0, derivative = 0.0;
      legendre_with_derivative(order, x, &value, &derivative);
      const double second =
          (2.0 * x * derivative - order * (order + 1.0) * value) / (1.0 - x * x);
      const double dx = derivative / second;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    points.nodes[i] = x;
  }
  for (int i = 0; i < n / 2; ++i) {
    const double x = 0.5 * (points.nodes[n - 1 - i] - points.nodes[i]);
    points.nodes[i] = -x;
    points.nodes[n - 1 - i] = x;
  }
  if (n % 2 == 1) points.nodes[n / 2] = 0.0;
  for (int i = 0; i < n; ++i) {
    const double lp = legendre(order, points.nodes[i]);
    points.weights[i] = 2.0 / (order * (order + 1.0) * lp * lp);
  }
  return points;
}

}  // namespace

PointSet make_points(int order, PointRule rule) {
  if (order < 0) throw InvalidInput("polynomial order must be non-negative");
  if (rule == PointRule::GaussLobatto) {
    if (order < 1) throw InvalidInput("Gauss-Lobatto points need order >= 1");
    return gauss_lobatto(order);
  }
  return gauss_legendre(order);
}

double legendre(int n, double x) {
  double value = 0.0, derivative = 0.0;
  legendre_with_derivative(n, x, &value, &derivative);
  return value;
}

double legendre_derivative(int n, double x) {
  double value = 0.0, derivative = 0.0;
  legendre_with_derivative(n, x, &value, &derivative);
  return derivative;
}

Eigen::VectorXd barycentric_weights(const PointSet& points) {
  const int n = points.size();
  Eigen::VectorXd w = Eigen::VectorXd::Ones(n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (k != j) w[j] /= points.nodes[j] - points.nodes[k];
    }
  }
  return w;
}

Eigen::VectorXd lagrange_values(const PointSet& points, double xi) {
  const int n = points.size();
  const Eigen::VectorXd w = barycentric_weights(points);
  Eigen::VectorXd values(n);
  for (int j = 0; j < n; ++j) {
    if (xi == points.nodes[j]) {
      values.setZero();
      values[j] = 1.0;
      return values;
    }
    values[j] = w[j] / (xi - points.nodes[j]);
  }
  return values / values.sum();
}

Eigen::MatrixXd lagrange_derivative_matrix(const PointSet& points) {
  const int n = points.size();
  const Eigen::VectorXd w = barycentric_weights(points);
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double diagonal = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      D(i, j) = (w[j] / w[i]) / (points.nodes[i] - points.nodes[j]);
      diagonal -= D(i, j);
    }
    // Negative-sum trick: rows annihilate constants exactly.
    D(i, i) = diagonal;
  }
  return D;
}

double iota_dg(int /*order*/) { return 0.0; }

double iota_huynh(int order) {
  if (order < 1) throw InvalidInput("Huynh g2 correction needs order >= 1");
  return 2.0 * (order + 1.0) /
         ((2.0 * order + 1.0) * order * leading_coefficient_squared(order));
}

double iota_min(int order) {
  return -2.0 / ((2.0 * order + 1.0) * leading_coefficient_squared(order));
}

CorrectionFamily::CorrectionFamily(CorrectionKind kind, int order, double iota)
    : kind_(kind), order_(order), iota_(iota), eta_(0.0) {
  if (order < 0) throw InvalidInput("polynomial order must be non-negative");
  if (!std::isfinite(iota)) throw InvalidInput("correction parameter must be finite");
  if (order == 0 && iota != 0.0) {
    throw InvalidInput("order 0 admits only the DG correction (iota = 0)");
  }
  if (iota <= iota_min(order)) {
    throw InvalidInput("correction parameter iota = " + std::to_string(iota) +
                       " is outside the stable range (iota > " +
                       std::to_string(iota_min(order)) + ")");
  }
  eta_ = iota * (2.0 * order + 1.0) * leading_coefficient_squared(order) / 2.0;
}

CorrectionFamily CorrectionFamily::dg(int order) {
  return CorrectionFamily(CorrectionKind::DG, order, iota_dg(order));
}

CorrectionFamily CorrectionFamily::huynh(int order) {
  return CorrectionFamily(CorrectionKind::HuynhG2, order, iota_huynh(order));
}

CorrectionFamily CorrectionFamily::osfr(int order, double iota) {
  return CorrectionFamily(CorrectionKind::OSFR, order, iota);
}

std::string CorrectionFamily::name() const {
  switch (kind_) {
    case CorrectionKind::DG:
      return "dg";
    case CorrectionKind::HuynhG2:
      return "huynh";
    case CorrectionKind::OSFR:
      return "osfr";
  }
  return "unknown";
}

double CorrectionFamily::left_value(double xi) const {
  const int p = order_;
  if (p == 0) return 0.5 * (1.0 - xi);
  const double sign = (p % 2 == 0) ? 0.5 : -0.5;
  return sign * (legendre(p, xi) -
                 (eta_ * legendre(p - 1, xi) + legendre(p + 1, xi)) / (1.0 + eta_));
}

double CorrectionFamily::left_derivative(double xi) const {
  const int p = order_;
  if (p == 0) return -0.5;
  const double sign = (p % 2 == 0) ? 0.5 : -0.5;
  return sign * (legendre_derivative(p, xi) -
                 (eta_ * legendre_derivative(p - 1, xi) +
                  legendre_derivative(p + 1, xi)) /
                     (1.0 + eta_));
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> correction_derivatives(
    const CorrectionFamily& family, const PointSet& points) {
  if (family.order() != points.order) {
    throw InvalidInput("correction family order does not match the point set");
  }
  const int n = points.size();
  Eigen::VectorXd hL(n), hR(n);
  for (int i = 0; i < n; ++i) {
    hL[i] = family.left_derivative(points.nodes[i]);
    hR[i] = family.right_derivative(points.nodes[i]);
  }
  return {hL, hR};
}

BasisOperators make_basis(const CorrectionFamily& family,
                          const PointSet& points) {
  BasisOperators basis;
  basis.points = points;
  basis.D = lagrange_derivative_matrix(points);
  basis.lL = lagrange_values(points, -1.0);
  basis.lR = lagrange_values(points, 1.0);
  std::tie(basis.hL, basis.hR) = correction_derivatives(family, points);
  return basis;
}

}  // namespace frvn

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <vector>

namespace lieschatten {

enum class GroupKind { Torus, SU2, SO3 };

/// One of the compact groups T^n, SU(2), SO(3).
struct GroupId {
  GroupKind kind = GroupKind::Torus;
  int n = 1;  // torus rank; unused for SU2/SO3

  static GroupId torus(int n);
  static GroupId su2() { return {GroupKind::SU2, 0}; }
  static GroupId so3() { return {GroupKind::SO3, 0}; }

  /// Parses "t<n>", "su2" or "so3". Throws std::invalid_argument otherwise.
  static GroupId parse(const std::string& name);

  int dim() const { return kind == GroupKind::Torus ? n : 3; }
  /// Length of the coordinate vector of a point.
  int coord_dim() const { return dim(); }
  bool is_torus() const { return kind == GroupKind::Torus; }
  std::string name() const;

  friend bool operator==(const GroupId& a, const GroupId& b) {
    return a.kind == b.kind && (a.kind != GroupKind::Torus || a.n == b.n);
  }
};

/// A group element in coordinates. Torus: x in [0,1)^n. SU2/SO3: z-y-z Euler
/// angles (phi, theta, psi) with phi in [0,2pi), theta in [0,pi] and psi in
/// [0,4pi) for SU2, [0,2pi) for SO3.
struct GroupPoint {
  GroupId group;
  Eigen::VectorXd coords;

  /// Builds a point and reduces the coordinates into the canonical ranges.
  static GroupPoint make(const GroupId& group, const Eigen::VectorXd& coords);
  static GroupPoint euler(const GroupId& group, double phi, double theta, double psi);
};

GroupPoint identity(const GroupId& group);
GroupPoint multiply(const GroupPoint& x, const GroupPoint& y);
GroupPoint inverse(const GroupPoint& x);

/// The l = 1/2 matrix of an SU2 point, rows/columns ordered m = -1/2, +1/2:
/// diag(e^{i phi/2}, e^{-i phi/2}) * [[c, s], [-s, c]] * diag(e^{i psi/2}, e^{-i psi/2})
/// with c = cos(theta/2), s = sin(theta/2).
Eigen::Matrix2cd su2_matrix(const GroupPoint& x);
GroupPoint su2_from_matrix(const Eigen::Matrix2cd& u);

/// Real rotation Rz(phi) Ry(theta) Rz(psi) of an SO3 point.
Eigen::Matrix3d so3_matrix(const GroupPoint& x);
GroupPoint so3_from_matrix(const Eigen::Matrix3d& r);

/// Distance between two points of the same group measured in the faithful
/// matrix realization (torus: max periodic coordinate distance).
double point_distance(const GroupPoint& x, const GroupPoint& y);

/// Haar-measure quadrature. `bandlimit` B certifies exactness on every product
/// of two matrix coefficients whose band is at most B (torus: max |k|_inf,
/// SU2/SO3: max 2l).
struct QuadratureRule {
  GroupId group;
  std::vector<GroupPoint> nodes;
  std::vector<double> weights;
  int bandlimit = 0;
  /// Torus rules only: points per axis of the uniform grid.
  int grid_points = 0;

  std::size_t size() const { return nodes.size(); }
};

QuadratureRule haar_quadrature(const GroupId& group, int bandlimit);

/// Torus grid with a caller-chosen number of points per axis (>= 2B+1).
QuadratureRule torus_quadrature(int n, int bandlimit, int points_per_axis);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int count, std::vector<double>& nodes, std::vector<double>& weights);

/// Exponential of t times the k-th unit generator (k = 0..dim-1): a rotation
/// by angle t about the x, y or z axis for SU2/SO3, a shift of coordinate k by
/// t/(2pi) on the torus.
GroupPoint one_parameter(const GroupId& group, int axis, double t);

}  // namespace lieschatten

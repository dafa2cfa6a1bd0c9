#pragma once

#include "lieschatten/groups.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace lieschatten {

/// Class [xi] of the unitary dual. Torus: index = k in Z^n. SU2: index = {2l}.
/// SO3: index = {l}.
struct IrrepLabel {
  GroupId group;
  std::vector<int> index;

  static IrrepLabel torus(std::vector<int> k);
  static IrrepLabel su2(int two_l) { return {GroupId::su2(), {two_l}}; }
  static IrrepLabel so3(int l) { return {GroupId::so3(), {l}}; }

  /// 2l in the SU2 parametrization (SO3 labels map to even values).
  int two_l() const;
  /// Largest frequency appearing in the matrix coefficients: |k|_inf or 2l.
  int band() const;
  int dim() const { return group.is_torus() ? 1 : two_l() + 1; }
  double casimir() const;
  std::string to_string() const;

  friend bool operator==(const IrrepLabel& a, const IrrepLabel& b) {
    return a.group == b.group && a.index == b.index;
  }
  friend bool operator<(const IrrepLabel& a, const IrrepLabel& b) { return a.index < b.index; }
};

struct IrrepInfo {
  IrrepLabel label;
  int dim = 1;
  double casimir = 0;  // lambda^2
  double weight = 1;   // <xi> = (1 + lambda^2)^{1/2}
};

IrrepInfo irrep_info(const IrrepLabel& label);

/// Classes with <xi> <= cutoff, ordered by (weight, label).
std::vector<IrrepInfo> enumerate_dual(const GroupId& group, double cutoff);

/// Classes with band() <= bandlimit, same ordering.
std::vector<IrrepInfo> enumerate_dual_band(const GroupId& group, int bandlimit);

int max_band(const std::vector<IrrepInfo>& duals);

/// Wigner small-d values d^j_{m'm}(theta) for j = j0, j0+1, ..., jmax with
/// j0 = max(|m'|, |m|), by the three-term recursion in j. All arguments are
/// doubled (two_mp = 2m'). Writes (two_jmax - two_j0)/2 + 1 values.
void wigner_small_d_ladder(int two_mp, int two_m, int two_jmax, double theta, double* out);

double wigner_small_d(int two_j, int two_mp, int two_m, double theta);

/// (2j+1)x(2j+1) matrix, rows/columns m = -j..j increasing.
Eigen::MatrixXd wigner_small_d_matrix(int two_j, double theta);

/// d-matrices for every two_j in 0..two_jmax at one angle.
std::vector<Eigen::MatrixXd> wigner_small_d_table(int two_jmax, double theta);

/// Unitary matrix of the irrep at x. Torus: e^{2 pi i k.x}. SU2/SO3:
/// D^l_{mn} = e^{-i m phi} d^l_{mn}(theta) e^{-i n psi}.
Eigen::MatrixXcd rep_matrix(const IrrepLabel& label, const GroupPoint& x);

/// Same, reusing a precomputed small-d matrix for x's middle angle.
Eigen::MatrixXcd rep_matrix(const IrrepLabel& label, const GroupPoint& x, const Eigen::MatrixXd& small_d);

struct BasisFunction {
  IrrepLabel label;
  int i = 0;
  int j = 0;
  double normalizer = 1;  // sqrt(d_xi)
};

/// Orthonormal basis sqrt(d_xi) xi_ij in dual order, (i, j) row-major.
std::vector<BasisFunction> peter_weyl_basis(const GroupId& group, double cutoff);
std::vector<BasisFunction> peter_weyl_basis(const std::vector<IrrepInfo>& duals);

/// Sum of d_xi^2.
std::size_t basis_size(const std::vector<IrrepInfo>& duals);

}  // namespace lieschatten

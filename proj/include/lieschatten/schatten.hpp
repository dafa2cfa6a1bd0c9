#pragma once

#include "lieschatten/dual.hpp"
#include "lieschatten/fourier.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace lieschatten {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Singular values at or below kSchattenFloor * size * s_max are dropped from
/// r < 1 sums; that is the SVD's roundoff level for an exact zero.
constexpr double kSchattenFloor = 4 * std::numeric_limits<double>::epsilon();

namespace detail {

template <class Derived>
bool is_diagonal(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() != m.cols()) return false;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (i != j && m(i, j) != typename Derived::Scalar(0)) return false;
  return true;
}

}  // namespace detail

template <class Derived>
using RealVector = Eigen::Matrix<typename Eigen::NumTraits<typename Derived::Scalar>::Real, Eigen::Dynamic, 1>;

/// Singular values in nonincreasing order. Diagonal input is read off exactly.
template <class Derived>
RealVector<Derived> singular_values(const Eigen::MatrixBase<Derived>& m) {
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  RealVector<Derived> s;
  if (detail::is_diagonal(m)) {
    s = m.diagonal().cwiseAbs();
    std::sort(s.data(), s.data() + s.size(), std::greater<Real>());
    return s;
  }
  using Plain = typename Derived::PlainObject;
  Eigen::BDCSVD<Plain> svd(m.eval());
  return svd.singularValues();
}

/// Schatten r-(quasi)norm (sum_i s_i^r)^{1/r}; r = infinity gives the operator
/// norm. r < 1 is legal and no triangle inequality is assumed anywhere.
template <class Derived>
typename Eigen::NumTraits<typename Derived::Scalar>::Real matrix_schatten_norm(const Eigen::MatrixBase<Derived>& m,
                                                                                double r) {
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  if (!(r > 0)) throw std::invalid_argument("Schatten order must be positive, got " + std::to_string(r));
  if (m.size() == 0) return Real(0);
  const RealVector<Derived> s = singular_values(m);
  if (std::isinf(r)) return s(0);
  const Real floor = r < 1 ? Real(kSchattenFloor) * Real(s.size()) * s(0) : Real(0);
  Real sum = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > floor) sum += std::pow(s(i), Real(r));
  return std::pow(sum, Real(1) / Real(r));
}

/// sum_i s_i^r, i.e. ||M||_{S_r}^r without the outer root.
template <class Derived>
typename Eigen::NumTraits<typename Derived::Scalar>::Real schatten_power_sum(const Eigen::MatrixBase<Derived>& m,
                                                                              double r) {
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  if (!(r > 0) || std::isinf(r)) throw std::invalid_argument("schatten_power_sum needs 0 < r < inf");
  if (m.size() == 0) return Real(0);
  const RealVector<Derived> s = singular_values(m);
  const Real floor = r < 1 ? Real(kSchattenFloor) * Real(s.size()) * s(0) : Real(0);
  Real sum = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > floor) sum += std::pow(s(i), Real(r));
  return sum;
}

/// |M|^r = (M^* M)^{r/2}. The positive matrix M^* M is diagonalized by the right
/// singular vectors of M, so small singular values keep full relative accuracy.
/// r = 2 returns M^* M itself.
template <class Derived>
typename Derived::PlainObject matrix_abs_power(const Eigen::MatrixBase<Derived>& m, double r) {
  using Plain = typename Derived::PlainObject;
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  if (!(r > 0)) throw std::invalid_argument("matrix_abs_power needs r > 0");
  if (m.rows() != m.cols()) throw std::invalid_argument("matrix_abs_power needs a square matrix");
  if (r == 2) return m.adjoint() * m;
  if (detail::is_diagonal(m)) {
    Plain out = Plain::Zero(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i) out(i, i) = std::pow(std::abs(m(i, i)), Real(r));
    return out;
  }
  Eigen::BDCSVD<Plain> svd(m.eval(), Eigen::ComputeFullV);
  RealVector<Derived> s = svd.singularValues();
  for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = s(i) > 0 ? std::pow(s(i), Real(r)) : Real(0);
  const Plain& v = svd.matrixV();
  return v * s.template cast<typename Derived::Scalar>().asDiagonal() * v.adjoint();
}

enum class Verdict { Convergent, Divergent, Inconclusive };

std::string to_string(Verdict v);

/// Partial sums of a nonnegative series sampled along a cutoff ladder.
struct SeriesReport {
  std::vector<double> cutoffs;
  std::vector<double> partial_sums;
  Verdict verdict = Verdict::Inconclusive;
};

/// S(L) = sum_{<xi> <= L} d_xi ||sigma(xi)||_{S_r}^r, or the running sup of
/// ||sigma(xi)||_op when r is infinite.
struct SchattenReport : SeriesReport {
  double r = 2;
};

/// Classifier tuning: increment ratio band and the absolute floor.
struct ClassifierBand {
  double delta = 0.05;
  double floor = 1e-12;
};

/// Verdict from the tail ratios of successive increments. Needs >= 4 cutoffs
/// (fewer gives Inconclusive); throws std::invalid_argument on decreasing sums.
Verdict classify_series(const std::vector<double>& cutoffs, const std::vector<double>& partial_sums,
                        ClassifierBand band = {});

/// Least-squares slope of log(increment) against log(cutoff) over the last
/// half of the ladder. NaN when fewer than two usable increments exist.
double growth_exponent(const std::vector<double>& cutoffs, const std::vector<double>& partial_sums);

double hs_norm_invariant(const InvariantSymbol& sym);

using SymbolSampler = std::function<Eigen::MatrixXcd(const GroupPoint&, const IrrepInfo&)>;

/// (sum_i w_i sum_xi d_xi ||sigma(x_i, xi)||_HS^2)^{1/2}.
double hs_norm_general(const SymbolSampler& sampler, const QuadratureRule& rule, const std::vector<IrrepInfo>& duals);

/// Per-class terms d_xi ||sigma(xi)||_{S_r}^r (r = inf: ||sigma(xi)||_op).
std::vector<double> schatten_terms(const InvariantSymbol& sym, double r);

/// Partial sums of the terms at each cutoff ladder entry.
std::vector<double> ladder_sums(const std::vector<IrrepInfo>& duals, const std::vector<double>& terms,
                                const std::vector<double>& cutoffs, bool running_sup);

SchattenReport schatten_report(const InvariantSymbol& sym, double r, const std::vector<double>& cutoffs);

/// sum_xi d_xi Tr sigma(xi).
Complex trace_invariant(const InvariantSymbol& sym);

struct TruncatedOperator {
  std::vector<BasisFunction> basis;
  Eigen::MatrixXcd matrix;
  Eigen::VectorXd singular_values;
  /// max |U S V^* - matrix|
  double svd_residual = 0;
};

/// The operator's matrix in the orthonormal Peter-Weyl basis up to cutoff,
/// assembled by applying the quantized operator to every basis function and
/// projecting with the forward transform.
TruncatedOperator truncate_operator(const InvariantSymbol& sym, double cutoff);
/// Same on a caller-supplied rule; NumericalGuardError if it is too coarse.
TruncatedOperator truncate_operator(const InvariantSymbol& sym, double cutoff,
                                    std::shared_ptr<const QuadratureRule> rule);

/// Singular values of every sigma(xi), each repeated d_xi times, nonincreasing.
Eigen::VectorXd singular_values_from_symbol(const InvariantSymbol& sym);

}  // namespace lieschatten

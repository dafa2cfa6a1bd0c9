#pragma once

#include "lieschatten/dual.hpp"
#include "lieschatten/groups.hpp"

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <memory>
#include <vector>

namespace lieschatten {

using Complex = std::complex<double>;

/// One d_xi x d_xi matrix per enumerated class, stored in dual order.
struct BlockSeries {
  GroupId group;
  double cutoff = 1;
  std::vector<IrrepInfo> duals;
  std::vector<Eigen::MatrixXcd> blocks;

  std::size_t size() const { return duals.size(); }
  /// Throws std::out_of_range when the label was not enumerated.
  const Eigen::MatrixXcd& at(const IrrepLabel& label) const;
  Eigen::MatrixXcd& at(const IrrepLabel& label);
  /// Blocks with weight <= cutoff (never extends the series).
  template <class Series>
  Series restricted(double new_cutoff) const;
};

/// Matrices fhat(xi) = int f(x) xi(x)^* dx.
struct FourierCoefficients : BlockSeries {};

/// x-independent symbol sigma_A(xi) of a left-invariant operator.
struct InvariantSymbol : BlockSeries {};

template <class Series>
Series BlockSeries::restricted(double new_cutoff) const {
  Series out;
  out.group = group;
  out.cutoff = std::min(cutoff, new_cutoff);
  const double limit = new_cutoff * new_cutoff * (1 + 1e-14);
  for (std::size_t i = 0; i < duals.size(); ++i) {
    if (1 + duals[i].casimir <= limit) {
      out.duals.push_back(duals[i]);
      out.blocks.push_back(blocks[i]);
    }
  }
  return out;
}

/// Symbol built block by block from a generator over the dual up to cutoff.
InvariantSymbol make_symbol(const GroupId& group, double cutoff,
                            const std::function<Eigen::MatrixXcd(const IrrepInfo&)>& block);
InvariantSymbol make_symbol(const std::vector<IrrepInfo>& duals,
                            const std::function<Eigen::MatrixXcd(const IrrepInfo&)>& block);
InvariantSymbol identity_symbol(const GroupId& group, double cutoff);
InvariantSymbol zero_symbol(const GroupId& group, double cutoff);

/// Samples of a function on the nodes of a quadrature rule.
struct SampledFunction {
  std::shared_ptr<const QuadratureRule> rule;
  Eigen::VectorXcd values;
};

SampledFunction sample(std::shared_ptr<const QuadratureRule> rule,
                       const std::function<Complex(const GroupPoint&)>& f);
/// Samples of the matrix coefficient xi_ij.
SampledFunction sample_coefficient(std::shared_ptr<const QuadratureRule> rule, const IrrepLabel& label,
                                   int i, int j);

/// Matrix coefficients of a fixed dual list evaluated on the nodes of a rule.
/// Column p of values() is xi_ab at every node, p running over (xi, a, b) in
/// Peter-Weyl basis order. Coefficient vectors use the same layout with
/// entry (xi, a, b) = fhat(xi)_{ba}, so each block maps to fhat(xi) read
/// column-major.
class SpectralTable {
 public:
  /// Throws NumericalGuardError if some dual's band exceeds the rule's bandlimit.
  SpectralTable(std::shared_ptr<const QuadratureRule> rule, std::vector<IrrepInfo> duals);

  const QuadratureRule& rule() const { return *rule_; }
  std::shared_ptr<const QuadratureRule> rule_ptr() const { return rule_; }
  const std::vector<IrrepInfo>& duals() const { return duals_; }
  const Eigen::MatrixXcd& values() const { return values_; }
  std::size_t basis_size() const { return static_cast<std::size_t>(values_.cols()); }
  std::size_t offset(std::size_t label_index) const { return offsets_[label_index]; }

  /// Columns of samples -> columns of coefficient vectors (quadrature).
  Eigen::MatrixXcd analyze(const Eigen::MatrixXcd& samples) const;
  /// Columns of coefficient vectors -> columns of node values (truncated series).
  Eigen::MatrixXcd synthesize(const Eigen::MatrixXcd& coeffs) const;

  FourierCoefficients to_blocks(const Eigen::VectorXcd& coeffs, double cutoff) const;
  Eigen::VectorXcd from_blocks(const BlockSeries& series) const;

  /// Multiplies every block of each coefficient column on the left by sigma(xi).
  Eigen::MatrixXcd apply_symbol(const InvariantSymbol& sym, const Eigen::MatrixXcd& coeffs) const;

 private:
  std::shared_ptr<const QuadratureRule> rule_;
  std::vector<IrrepInfo> duals_;
  std::vector<std::size_t> offsets_;
  Eigen::MatrixXcd values_;
};

/// fhat(xi) = sum_i w_i f(x_i) xi(x_i)^* for every listed class.
FourierCoefficients forward_transform(const SampledFunction& f, const std::vector<IrrepInfo>& duals);

/// Truncated series sum_xi d_xi Tr(xi(x) fhat(xi)).
Complex inverse_transform(const BlockSeries& coeffs, const GroupPoint& x);

/// (sum_xi d_xi ||fhat(xi)||_HS^2)^{1/2}.
double l2_norm_from_coeffs(const BlockSeries& coeffs);
/// sum_xi d_xi Tr(fhat(xi) ghat(xi)^*).
Complex inner_product_from_coeffs(const BlockSeries& f, const BlockSeries& g);
/// (sum_i w_i |f(x_i)|^2)^{1/2}.
double quadrature_l2_norm(const SampledFunction& f);
Complex quadrature_inner_product(const SampledFunction& f, const SampledFunction& g);

/// Samples of Af for the invariant operator with symbol sym. Throws
/// NumericalGuardError when the rule cannot resolve the symbol's duals.
SampledFunction apply_invariant_operator(const InvariantSymbol& sym, const SampledFunction& f);

using BlackBoxOperator = std::function<SampledFunction(const SampledFunction&)>;

struct SymbolExtraction {
  InvariantSymbol symbol;
  /// max |xi(x1)^*(A xi)(x1) - sigma(xi)| over all blocks, x1 a second node.
  double invariance_defect = 0;
  bool invariant = true;
};

/// sigma(xi) = xi(x0)^* (A xi)(x0), A applied to each coefficient xi_ij. The
/// reconstruction is repeated at a second node; a difference above 1e-6 clears
/// `invariant`.
SymbolExtraction symbol_of_operator(const BlackBoxOperator& apply, const std::vector<IrrepInfo>& duals,
                                    std::shared_ptr<const QuadratureRule> rule);

/// k(x, y) = sum_xi d_xi Tr(xi(x) sigma(xi) xi(y)^*).
Complex kernel_of_invariant(const InvariantSymbol& sym, const GroupPoint& x, const GroupPoint& y);

/// All k(x_i, x_j) over the nodes of a rule (nodes x nodes).
Eigen::MatrixXcd kernel_matrix(const InvariantSymbol& sym, std::shared_ptr<const QuadratureRule> rule);

/// Convolution profile k(x, e) = sum_xi d_xi Tr(xi(x) sigma(xi)) at every node.
Eigen::VectorXcd kernel_profile(const InvariantSymbol& sym, std::shared_ptr<const QuadratureRule> rule);

/// (sum_i w_i |k(x_i, e)|^p)^{1/p}.
double kernel_lp_norm(const InvariantSymbol& sym, double p, std::shared_ptr<const QuadratureRule> rule);

}  // namespace lieschatten

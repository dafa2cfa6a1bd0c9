#pragma once

#include "lieschatten/fourier.hpp"
#include "lieschatten/schatten.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lieschatten {

enum class FamilyKind { Bessel, LaplacianPower, SubLaplacianPower, ConvolutionSequence, Custom };

std::string to_string(FamilyKind kind);

/// A built-in operator family on a group.
///   Bessel(alpha)            (I - L)^{-alpha/2}, symbol <xi>^{-alpha} I
///   LaplacianPower(alpha)    (I - L)^alpha, symbol (1 + lambda^2)^alpha I
///   SubLaplacianPower(alpha) (I - L_sub)^{-alpha/2}, SU2/SO3 only
///   ConvolutionSequence      f * kappa with kappa-hat(k) = sequence[k], torus only
///   Custom                   a fixed symbol
struct FamilySpec {
  FamilyKind kind = FamilyKind::Bessel;
  GroupId group;
  double alpha = 0;
  std::map<std::vector<int>, Complex> sequence;
  std::optional<InvariantSymbol> custom;

  /// Throws std::invalid_argument when the kind does not fit the group.
  void validate() const;
  InvariantSymbol symbol(double cutoff) const;
};

/// <xi>^{-alpha} I per class.
InvariantSymbol bessel_symbol(const GroupId& group, double alpha, double cutoff);
/// (1 + lambda^2) I, the symbol of I - L.
InvariantSymbol laplacian_symbol(const GroupId& group, double cutoff);
InvariantSymbol laplacian_power_symbol(const GroupId& group, double alpha, double cutoff);
/// diag over m = -l..l of (1 + l(l+1) - m^2)^{-alpha/2}. SU2/SO3 only, alpha > 0.
InvariantSymbol sublaplacian_symbol(const GroupId& group, double alpha, double cutoff);
/// sigma(k) = c[k]; every label up to the cutoff must be present.
InvariantSymbol convolution_symbol(const GroupId& torus, const std::map<std::vector<int>, Complex>& c,
                                   double cutoff);
InvariantSymbol convolution_symbol(const GroupId& torus, const std::function<Complex(const std::vector<int>&)>& c,
                                   double cutoff);

/// c_k = (1 + |k|)^{-1/2} / log(2 + |k|); square summable, not l^r for r < 2.
double carleman_coefficient(const std::vector<int>& k);

/// Partial sums of sum d_xi^2 <xi>^{-s} along the ladder, with verdict.
SeriesReport lemma2_partial_sum(const GroupId& group, double s, const std::vector<double>& cutoffs);

/// The alpha*r value where membership switches: n on T^n and 3 on SU2/SO3
/// for Bessel, 4 for the sub-Laplacian.
double critical_exponent(FamilyKind kind, const GroupId& group);

struct ScanRow {
  double alpha = 0;
  double r = 0;
  double product = 0;  // alpha * r
  double critical = 0;
  Verdict verdict = Verdict::Inconclusive;
  /// slope of log increments vs log cutoff; NaN when it cannot be fitted
  double growth_exponent = 0;
  SchattenReport report;
};

/// One row per (alpha, r), alphas outer. Points with |alpha r - critical| < 0.5
/// are reported Inconclusive. Only Bessel and SubLaplacianPower are scanned.
std::vector<ScanRow> threshold_scan(FamilyKind kind, const GroupId& group, const std::vector<double>& alphas,
                                    const std::vector<double>& rs, const std::vector<double>& cutoffs);

struct DecayBound {
  bool bounded = false;
  /// sup of ||sigma(xi)||_{S_r} d^{-1/r} <xi>^{s/r} over the symbol's classes
  double sup = 0;
  IrrepLabel witness;
  SeriesReport running_sup;
};

/// Whether ||sigma(xi)||_{S_r} <= C d^{1/r} <xi>^{-s/r} looks uniform in xi: the
/// running sup along the ladder must classify Convergent. An empty ladder means
/// {c/8, c/4, c/2, c} for the symbol's cutoff c (entries below 1 dropped).
DecayBound decay_bound_check(const InvariantSymbol& sym, double r, double s, std::vector<double> cutoffs = {});

/// Finite-difference sum of squares of left-invariant vector fields (unit
/// generators `axes`) applied to a function resolved by its rule, using a
/// sixth order central stencil with step h along x exp(t X).
BlackBoxOperator discretized_vector_field_squares(const GroupId& group, std::vector<int> axes, double h = 1e-2);
/// L = sum of all squared unit generators; its symbol is -lambda^2 I.
BlackBoxOperator discretized_laplacian(const GroupId& group);
/// X1^2 + X2^2 on SU2/SO3; symbol diag(m^2 - l(l+1)).
BlackBoxOperator discretized_sublaplacian(const GroupId& group);
/// (f * k)(x_i) = sum_j w_j f(x_j) k(x_j^{-1} x_i).
BlackBoxOperator convolution_operator(std::function<Complex(const GroupPoint&)> kernel);

}  // namespace lieschatten

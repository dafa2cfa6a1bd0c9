#include "lieschatten/families.hpp"

#include "lieschatten/error.hpp"
#include "lieschatten/parallel.hpp"

#include <array>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace lieschatten {

namespace {

Eigen::MatrixXcd scalar_block(const IrrepInfo& info, double value) {
  return Eigen::MatrixXcd::Identity(info.dim, info.dim) * Complex(value, 0);
}

void require_rotation_group(const GroupId& group, const char* what) {
  if (group.is_torus()) throw std::invalid_argument(std::string(what) + " is defined on su2 and so3 only");
}

void require_torus(const GroupId& group, const char* what) {
  if (!group.is_torus()) throw std::invalid_argument(std::string(what) + " is defined on tori only");
}

// sixth order central second difference, offsets -3..3
constexpr std::array<double, 7> kStencil = {1.0 / 90, -3.0 / 20, 3.0 / 2, -49.0 / 18, 3.0 / 2, -3.0 / 20, 1.0 / 90};

// Row of all basis coefficients xi_ab(y) in Peter-Weyl order.
void coefficient_row(const std::vector<IrrepInfo>& duals, const std::vector<std::size_t>& offsets,
                     const GroupPoint& y, double scale, Eigen::RowVectorXcd& row) {
  const bool torus = y.group.is_torus();
  std::vector<Eigen::MatrixXd> small_d;
  if (!torus) small_d = wigner_small_d_table(max_band(duals), y.coords(1));
  for (std::size_t p = 0; p < duals.size(); ++p) {
    const IrrepLabel& lab = duals[p].label;
    const Eigen::MatrixXcd m = torus ? rep_matrix(lab, y) : rep_matrix(lab, y, small_d[static_cast<std::size_t>(lab.two_l())]);
    const int d = duals[p].dim;
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) row(static_cast<Eigen::Index>(offsets[p]) + a * d + b) += scale * m(a, b);
  }
}

struct FieldSquaresState {
  std::mutex lock;
  const QuadratureRule* key = nullptr;
  std::shared_ptr<const QuadratureRule> rule;  // keeps key alive
  std::unique_ptr<SpectralTable> table;
  Eigen::MatrixXcd image;  // (sum X_a^2) xi_p at every node
  Eigen::VectorXcd dims;
};

}  // namespace

std::string to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::Bessel: return "bessel";
    case FamilyKind::LaplacianPower: return "laplacian";
    case FamilyKind::SubLaplacianPower: return "sublaplacian";
    case FamilyKind::ConvolutionSequence: return "convolution";
    case FamilyKind::Custom: return "custom";
  }
  return "custom";
}

void FamilySpec::validate() const {
  switch (kind) {
    case FamilyKind::SubLaplacianPower:
      require_rotation_group(group, "the sub-Laplacian");
      if (!(alpha > 0)) throw std::invalid_argument("sub-Laplacian power needs alpha > 0");
      break;
    case FamilyKind::ConvolutionSequence: require_torus(group, "a convolution sequence"); break;
    case FamilyKind::Custom:
      if (!custom) throw std::invalid_argument("custom family without a symbol");
      if (!(custom->group == group)) throw std::invalid_argument("custom symbol lives on another group");
      break;
    default: break;
  }
  if (!std::isfinite(alpha)) throw std::invalid_argument("alpha must be finite");
}

InvariantSymbol FamilySpec::symbol(double cutoff) const {
  validate();
  switch (kind) {
    case FamilyKind::Bessel: return bessel_symbol(group, alpha, cutoff);
    case FamilyKind::LaplacianPower: return laplacian_power_symbol(group, alpha, cutoff);
    case FamilyKind::SubLaplacianPower: return sublaplacian_symbol(group, alpha, cutoff);
    case FamilyKind::ConvolutionSequence: return convolution_symbol(group, sequence, cutoff);
    case FamilyKind::Custom: return custom->restricted<InvariantSymbol>(cutoff);
  }
  throw std::logic_error("unknown family");
}

InvariantSymbol bessel_symbol(const GroupId& group, double alpha, double cutoff) {
  return make_symbol(group, cutoff, [alpha](const IrrepInfo& i) {
    return scalar_block(i, std::pow(1 + i.casimir, -alpha / 2));
  });
}

InvariantSymbol laplacian_symbol(const GroupId& group, double cutoff) {
  return make_symbol(group, cutoff, [](const IrrepInfo& i) { return scalar_block(i, 1 + i.casimir); });
}

InvariantSymbol laplacian_power_symbol(const GroupId& group, double alpha, double cutoff) {
  return make_symbol(group, cutoff, [alpha](const IrrepInfo& i) {
    return scalar_block(i, std::pow(1 + i.casimir, alpha));
  });
}

InvariantSymbol sublaplacian_symbol(const GroupId& group, double alpha, double cutoff) {
  require_rotation_group(group, "the sub-Laplacian");
  if (!(alpha > 0)) throw std::invalid_argument("sub-Laplacian power needs alpha > 0");
  return make_symbol(group, cutoff, [alpha](const IrrepInfo& i) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(i.dim, i.dim);
    const int two_l = i.label.two_l();
    for (int a = 0; a < i.dim; ++a) {
      const double mm = (2 * a - two_l) / 2.0;
      m(a, a) = std::pow(1 + i.casimir - mm * mm, -alpha / 2);
    }
    return m;
  });
}

InvariantSymbol convolution_symbol(const GroupId& torus, const std::map<std::vector<int>, Complex>& c,
                                   double cutoff) {
  require_torus(torus, "a convolution sequence");
  return make_symbol(torus, cutoff, [&c](const IrrepInfo& i) {
    const auto it = c.find(i.label.index);
    if (it == c.end()) throw std::invalid_argument("convolution sequence has no value at " + i.label.to_string());
    return Eigen::MatrixXcd::Constant(1, 1, it->second);
  });
}

InvariantSymbol convolution_symbol(const GroupId& torus, const std::function<Complex(const std::vector<int>&)>& c,
                                   double cutoff) {
  require_torus(torus, "a convolution sequence");
  return make_symbol(torus, cutoff, [&c](const IrrepInfo& i) {
    return Eigen::MatrixXcd::Constant(1, 1, c(i.label.index));
  });
}

double carleman_coefficient(const std::vector<int>& k) {
  double norm2 = 0;
  for (int v : k) norm2 += static_cast<double>(v) * v;
  const double a = std::sqrt(norm2);
  return 1 / (std::sqrt(1 + a) * std::log(2 + a));
}

SeriesReport lemma2_partial_sum(const GroupId& group, double s, const std::vector<double>& cutoffs) {
  if (cutoffs.empty()) throw std::invalid_argument("empty cutoff ladder");
  const std::vector<IrrepInfo> duals = enumerate_dual(group, *std::max_element(cutoffs.begin(), cutoffs.end()));
  std::vector<double> terms(duals.size());
  for (std::size_t p = 0; p < duals.size(); ++p) {
    const double d = duals[p].dim;
    terms[p] = d * d * std::pow(duals[p].weight, -s);
  }
  SeriesReport rep;
  rep.cutoffs = cutoffs;
  rep.partial_sums = ladder_sums(duals, terms, cutoffs, false);
  rep.verdict = classify_series(rep.cutoffs, rep.partial_sums);
  return rep;
}

double critical_exponent(FamilyKind kind, const GroupId& group) {
  switch (kind) {
    case FamilyKind::Bessel: return group.dim();
    case FamilyKind::SubLaplacianPower:
      require_rotation_group(group, "the sub-Laplacian");
      return 4;
    default: throw std::invalid_argument("no threshold is known for family " + to_string(kind));
  }
}

std::vector<ScanRow> threshold_scan(FamilyKind kind, const GroupId& group, const std::vector<double>& alphas,
                                    const std::vector<double>& rs, const std::vector<double>& cutoffs) {
  const double critical = critical_exponent(kind, group);
  if (cutoffs.empty()) throw std::invalid_argument("empty cutoff ladder");
  const double top = *std::max_element(cutoffs.begin(), cutoffs.end());
  std::vector<ScanRow> rows;
  for (double alpha : alphas) {
    FamilySpec spec{kind, group, alpha, {}, std::nullopt};
    const InvariantSymbol sym = spec.symbol(top);
    for (double r : rs) {
      ScanRow row;
      row.alpha = alpha;
      row.r = r;
      row.product = alpha * r;
      row.critical = critical;
      row.report = schatten_report(sym, r, cutoffs);
      row.verdict = std::abs(row.product - critical) < 0.5 ? Verdict::Inconclusive : row.report.verdict;
      row.growth_exponent = growth_exponent(row.report.cutoffs, row.report.partial_sums);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

DecayBound decay_bound_check(const InvariantSymbol& sym, double r, double s, std::vector<double> cutoffs) {
  if (!(r > 0)) throw std::invalid_argument("Schatten order must be positive");
  if (cutoffs.empty()) {
    for (double f : {8.0, 4.0, 2.0, 1.0})
      if (sym.cutoff / f >= 1) cutoffs.push_back(sym.cutoff / f);
  }
  DecayBound out;
  std::vector<double> q(sym.duals.size());
  parallel_for(q.size(), [&](std::size_t p) {
    const IrrepInfo& i = sym.duals[p];
    const double inv_r = std::isinf(r) ? 0.0 : 1 / r;
    q[p] = matrix_schatten_norm(sym.blocks[p], r) * std::pow(i.dim, -inv_r) * std::pow(i.weight, s * inv_r);
  });
  for (std::size_t p = 0; p < q.size(); ++p) {
    if (p == 0 || q[p] > out.sup) {
      out.sup = q[p];
      out.witness = sym.duals[p].label;
    }
  }
  out.running_sup.cutoffs = cutoffs;
  out.running_sup.partial_sums = ladder_sums(sym.duals, q, cutoffs, true);
  out.running_sup.verdict = classify_series(cutoffs, out.running_sup.partial_sums);
  out.bounded = out.running_sup.verdict == Verdict::Convergent;
  return out;
}

BlackBoxOperator discretized_vector_field_squares(const GroupId& group, std::vector<int> axes, double h) {
  for (int a : axes)
    if (a < 0 || a >= group.dim()) throw std::invalid_argument("generator index out of range");
  if (!(h > 0)) throw std::invalid_argument("step must be positive");
  auto state = std::make_shared<FieldSquaresState>();
  return [group, axes, h, state](const SampledFunction& f) -> SampledFunction {
    if (!(f.rule->group == group)) throw std::invalid_argument("function lives on another group");
    std::lock_guard<std::mutex> guard(state->lock);
    if (state->key != f.rule.get()) {
      const std::vector<IrrepInfo> duals = enumerate_dual_band(group, f.rule->bandlimit);
      auto table = std::make_unique<SpectralTable>(f.rule, duals);
      std::vector<std::size_t> offsets(duals.size());
      for (std::size_t p = 0; p < duals.size(); ++p) offsets[p] = table->offset(p);
      const QuadratureRule& rule = *f.rule;
      Eigen::MatrixXcd image = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rule.size()),
                                                      static_cast<Eigen::Index>(table->basis_size()));
      // shifts exp(k h X_a) for all axes and k != 0
      std::vector<std::pair<GroupPoint, double>> shifts;
      double centre = 0;
      for (int a : axes) {
        centre += kStencil[3];
        for (int k = -3; k <= 3; ++k)
          if (k != 0) shifts.emplace_back(one_parameter(group, a, k * h), kStencil[static_cast<std::size_t>(k + 3)]);
      }
      const double inv_h2 = 1 / (h * h);
      parallel_for(rule.size(), [&](std::size_t i) {
        Eigen::RowVectorXcd row = Eigen::RowVectorXcd::Zero(image.cols());
        coefficient_row(duals, offsets, rule.nodes[i], centre * inv_h2, row);
        for (const auto& [g, c] : shifts) coefficient_row(duals, offsets, multiply(rule.nodes[i], g), c * inv_h2, row);
        image.row(static_cast<Eigen::Index>(i)) = row;
      });
      state->dims.resize(image.cols());
      for (std::size_t p = 0; p < duals.size(); ++p)
        state->dims.segment(static_cast<Eigen::Index>(offsets[p]), duals[p].dim * duals[p].dim)
            .setConstant(static_cast<double>(duals[p].dim));
      state->image = std::move(image);
      state->table = std::move(table);
      state->rule = f.rule;
      state->key = f.rule.get();
    }
    const Eigen::MatrixXcd c = state->table->analyze(f.values);
    return {f.rule, state->image * (state->dims.asDiagonal() * c).col(0)};
  };
}

BlackBoxOperator discretized_laplacian(const GroupId& group) {
  std::vector<int> axes(static_cast<std::size_t>(group.dim()));
  for (int a = 0; a < group.dim(); ++a) axes[static_cast<std::size_t>(a)] = a;
  return discretized_vector_field_squares(group, axes);
}

BlackBoxOperator discretized_sublaplacian(const GroupId& group) {
  require_rotation_group(group, "the sub-Laplacian");
  return discretized_vector_field_squares(group, {0, 1});
}

BlackBoxOperator convolution_operator(std::function<Complex(const GroupPoint&)> kernel) {
  return [kernel = std::move(kernel)](const SampledFunction& f) -> SampledFunction {
    const QuadratureRule& rule = *f.rule;
    const std::size_t n = rule.size();
    std::vector<GroupPoint> inv(n);
    for (std::size_t j = 0; j < n; ++j) inv[j] = inverse(rule.nodes[j]);
    SampledFunction out{f.rule, Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n))};
    parallel_for(n, [&](std::size_t i) {
      Complex acc = 0;
      for (std::size_t j = 0; j < n; ++j)
        acc += rule.weights[j] * f.values(static_cast<Eigen::Index>(j)) * kernel(multiply(inv[j], rule.nodes[i]));
      out.values(static_cast<Eigen::Index>(i)) = acc;
    });
    return out;
  };
}

}  // namespace lieschatten

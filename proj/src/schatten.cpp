#include "lieschatten/schatten.hpp"

#include "lieschatten/parallel.hpp"

#include <cmath>
#include <functional>
#include <numeric>

namespace lieschatten {

namespace {

void require_increasing(const std::vector<double>& cutoffs) {
  for (std::size_t i = 1; i < cutoffs.size(); ++i) {
    if (!(cutoffs[i] > cutoffs[i - 1])) throw std::invalid_argument("cutoff ladder must be strictly increasing");
  }
}

constexpr std::size_t kAssemblyChunk = 64;

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Convergent: return "Convergent";
    case Verdict::Divergent: return "Divergent";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

Verdict classify_series(const std::vector<double>& cutoffs, const std::vector<double>& partial_sums,
                        ClassifierBand band) {
  if (cutoffs.size() != partial_sums.size()) throw std::invalid_argument("cutoffs and partial sums differ in length");
  require_increasing(cutoffs);
  for (std::size_t i = 1; i < partial_sums.size(); ++i) {
    if (partial_sums[i] < partial_sums[i - 1]) {
      throw std::invalid_argument("partial sums must be nondecreasing");
    }
  }
  if (partial_sums.size() < 4) return Verdict::Inconclusive;

  std::vector<double> inc(partial_sums.size() - 1);
  for (std::size_t j = 0; j < inc.size(); ++j) inc[j] = partial_sums[j + 1] - partial_sums[j];
  if (std::all_of(inc.begin(), inc.end(), [&](double d) { return d < band.floor; })) return Verdict::Convergent;

  std::vector<double> ratio(inc.size() - 1);
  for (std::size_t j = 0; j < ratio.size(); ++j) {
    const bool here = inc[j] < band.floor, next = inc[j + 1] < band.floor;
    if (next) {
      ratio[j] = 0;
    } else if (here) {
      ratio[j] = kInfinity;
    } else {
      ratio[j] = inc[j + 1] / inc[j];
    }
  }
  const std::size_t tail = std::min(ratio.size(), std::max<std::size_t>(2, (ratio.size() + 1) / 2));
  const auto first = ratio.end() - static_cast<std::ptrdiff_t>(tail);
  if (std::all_of(first, ratio.end(), [&](double q) { return q <= 1 - band.delta; })) return Verdict::Convergent;
  if (std::all_of(first, ratio.end(), [&](double q) { return q >= 1 - band.delta / 2; })) return Verdict::Divergent;
  return Verdict::Inconclusive;
}

double growth_exponent(const std::vector<double>& cutoffs, const std::vector<double>& partial_sums) {
  if (cutoffs.size() != partial_sums.size() || cutoffs.size() < 3) return std::nan("");
  const std::size_t n_inc = cutoffs.size() - 1;
  const std::size_t use = (n_inc + 1) / 2;
  std::vector<double> xs, ys;
  for (std::size_t j = n_inc - use; j < n_inc; ++j) {
    const double d = partial_sums[j + 1] - partial_sums[j];
    if (!(d > 0)) return std::nan("");
    xs.push_back(std::log(cutoffs[j + 1]));
    ys.push_back(std::log(d));
  }
  if (xs.size() < 2) return std::nan("");
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

double hs_norm_invariant(const InvariantSymbol& sym) {
  double s = 0;
  for (std::size_t p = 0; p < sym.duals.size(); ++p) s += sym.duals[p].dim * sym.blocks[p].squaredNorm();
  return std::sqrt(s);
}

double hs_norm_general(const SymbolSampler& sampler, const QuadratureRule& rule, const std::vector<IrrepInfo>& duals) {
  double total = 0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    double at_node = 0;
    for (const IrrepInfo& info : duals) at_node += info.dim * sampler(rule.nodes[i], info).squaredNorm();
    total += rule.weights[i] * at_node;
  }
  return std::sqrt(total);
}

std::vector<double> schatten_terms(const InvariantSymbol& sym, double r) {
  if (!(r > 0)) throw std::invalid_argument("Schatten order must be positive");
  std::vector<double> terms(sym.duals.size());
  parallel_for(terms.size(), [&](std::size_t p) {
    terms[p] = std::isinf(r) ? matrix_schatten_norm(sym.blocks[p], r)
                             : sym.duals[p].dim * schatten_power_sum(sym.blocks[p], r);
  });
  return terms;
}

std::vector<double> ladder_sums(const std::vector<IrrepInfo>& duals, const std::vector<double>& terms,
                                const std::vector<double>& cutoffs, bool running_sup) {
  require_increasing(cutoffs);
  std::vector<double> out;
  out.reserve(cutoffs.size());
  double acc = 0;
  std::size_t p = 0;
  for (double cut : cutoffs) {
    const double limit = cut * cut * (1 + 1e-14);
    double shell = 0;
    for (; p < duals.size() && 1 + duals[p].casimir <= limit; ++p) {
      if (running_sup) {
        shell = std::max(shell, terms[p]);
      } else {
        shell += terms[p];
      }
    }
    acc = running_sup ? std::max(acc, shell) : acc + shell;
    out.push_back(acc);
  }
  return out;
}

SchattenReport schatten_report(const InvariantSymbol& sym, double r, const std::vector<double>& cutoffs) {
  require_increasing(cutoffs);
  for (double c : cutoffs) {
    if (c > sym.cutoff * (1 + 1e-12)) {
      throw std::invalid_argument("cutoff " + std::to_string(c) + " exceeds the symbol's truncation " +
                                  std::to_string(sym.cutoff));
    }
  }
  SchattenReport rep;
  rep.r = r;
  rep.cutoffs = cutoffs;
  rep.partial_sums = ladder_sums(sym.duals, schatten_terms(sym, r), cutoffs, std::isinf(r));
  rep.verdict = classify_series(rep.cutoffs, rep.partial_sums);
  return rep;
}

Complex trace_invariant(const InvariantSymbol& sym) {
  Complex t = 0;
  for (std::size_t p = 0; p < sym.duals.size(); ++p) t += static_cast<double>(sym.duals[p].dim) * sym.blocks[p].trace();
  return t;
}

TruncatedOperator truncate_operator(const InvariantSymbol& sym, double cutoff,
                                    std::shared_ptr<const QuadratureRule> rule) {
  const InvariantSymbol local = sym.restricted<InvariantSymbol>(cutoff);
  const SpectralTable table(std::move(rule), local.duals);
  const auto n = static_cast<Eigen::Index>(table.basis_size());

  Eigen::VectorXd root_dim(n);
  for (std::size_t p = 0; p < local.duals.size(); ++p) {
    const auto lo = static_cast<Eigen::Index>(table.offset(p));
    const Eigen::Index len = local.duals[p].dim * local.duals[p].dim;
    root_dim.segment(lo, len).setConstant(std::sqrt(static_cast<double>(local.duals[p].dim)));
  }

  TruncatedOperator op;
  op.basis = peter_weyl_basis(local.duals);
  op.matrix.resize(n, n);
  for (Eigen::Index c0 = 0; c0 < n; c0 += static_cast<Eigen::Index>(kAssemblyChunk)) {
    const Eigen::Index w = std::min<Eigen::Index>(static_cast<Eigen::Index>(kAssemblyChunk), n - c0);
    // samples of sqrt(d) xi_ab at the nodes, one column per basis function
    const Eigen::MatrixXcd basis_samples =
        table.values().middleCols(c0, w) * root_dim.segment(c0, w).cast<Complex>().asDiagonal();
    const Eigen::MatrixXcd image = table.synthesize(table.apply_symbol(local, table.analyze(basis_samples)));
    op.matrix.middleCols(c0, w) = root_dim.cast<Complex>().asDiagonal() * table.analyze(image);
  }

  Eigen::BDCSVD<Eigen::MatrixXcd> svd(op.matrix, Eigen::ComputeThinU | Eigen::ComputeThinV);
  op.singular_values = svd.singularValues();
  op.svd_residual =
      n == 0 ? 0.0
             : (svd.matrixU() * op.singular_values.cast<Complex>().asDiagonal() * svd.matrixV().adjoint() - op.matrix)
                   .cwiseAbs()
                   .maxCoeff();
  return op;
}

TruncatedOperator truncate_operator(const InvariantSymbol& sym, double cutoff) {
  const std::vector<IrrepInfo> duals = sym.restricted<InvariantSymbol>(cutoff).duals;
  return truncate_operator(sym, cutoff, std::make_shared<QuadratureRule>(haar_quadrature(sym.group, max_band(duals))));
}

Eigen::VectorXd singular_values_from_symbol(const InvariantSymbol& sym) {
  std::vector<double> all;
  for (std::size_t p = 0; p < sym.duals.size(); ++p) {
    const Eigen::VectorXd s = singular_values(sym.blocks[p]);
    for (int rep = 0; rep < sym.duals[p].dim; ++rep) all.insert(all.end(), s.data(), s.data() + s.size());
  }
  std::sort(all.begin(), all.end(), std::greater<double>());
  return Eigen::Map<const Eigen::VectorXd>(all.data(), static_cast<Eigen::Index>(all.size()));
}

}  // namespace lieschatten

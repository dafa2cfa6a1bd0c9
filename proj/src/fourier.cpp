#include "lieschatten/fourier.hpp"

#include "lieschatten/error.hpp"
#include "lieschatten/parallel.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

namespace lieschatten {

namespace {

void require_group(const GroupId& a, const GroupId& b, const char* what) {
  if (!(a == b)) throw std::invalid_argument(std::string(what) + ": group mismatch");
}

// n = 2^a 3^b 5^c
bool fft_friendly(int n) {
  if (n < 2) return false;
  for (int p : {2, 3, 5})
    while (n % p == 0) n /= p;
  return n == 1;
}

constexpr std::size_t kTableBudget = 60'000'000;  // complex entries

}  // namespace

const Eigen::MatrixXcd& BlockSeries::at(const IrrepLabel& label) const {
  for (std::size_t i = 0; i < duals.size(); ++i)
    if (duals[i].label == label) return blocks[i];
  throw std::out_of_range("label " + label.to_string() + " not in series");
}

Eigen::MatrixXcd& BlockSeries::at(const IrrepLabel& label) {
  return const_cast<Eigen::MatrixXcd&>(static_cast<const BlockSeries&>(*this).at(label));
}

InvariantSymbol make_symbol(const std::vector<IrrepInfo>& duals,
                            const std::function<Eigen::MatrixXcd(const IrrepInfo&)>& block) {
  InvariantSymbol sym;
  if (!duals.empty()) sym.group = duals.front().label.group;
  sym.duals = duals;
  sym.blocks.resize(duals.size());
  double top = 1;
  for (std::size_t i = 0; i < duals.size(); ++i) {
    sym.blocks[i] = block(duals[i]);
    if (sym.blocks[i].rows() != duals[i].dim || sym.blocks[i].cols() != duals[i].dim) {
      throw std::invalid_argument("symbol block has wrong shape at " + duals[i].label.to_string());
    }
    top = std::max(top, duals[i].weight);
  }
  sym.cutoff = top;
  return sym;
}

InvariantSymbol make_symbol(const GroupId& group, double cutoff,
                            const std::function<Eigen::MatrixXcd(const IrrepInfo&)>& block) {
  InvariantSymbol sym = make_symbol(enumerate_dual(group, cutoff), block);
  sym.group = group;
  sym.cutoff = cutoff;
  return sym;
}

InvariantSymbol identity_symbol(const GroupId& group, double cutoff) {
  return make_symbol(group, cutoff, [](const IrrepInfo& i) -> Eigen::MatrixXcd {
    return Eigen::MatrixXcd::Identity(i.dim, i.dim);
  });
}

InvariantSymbol zero_symbol(const GroupId& group, double cutoff) {
  return make_symbol(group, cutoff, [](const IrrepInfo& i) -> Eigen::MatrixXcd {
    return Eigen::MatrixXcd::Zero(i.dim, i.dim);
  });
}

SampledFunction sample(std::shared_ptr<const QuadratureRule> rule,
                       const std::function<Complex(const GroupPoint&)>& f) {
  SampledFunction out{rule, Eigen::VectorXcd(static_cast<Eigen::Index>(rule->size()))};
  for (std::size_t i = 0; i < rule->size(); ++i) out.values(static_cast<Eigen::Index>(i)) = f(rule->nodes[i]);
  return out;
}

SampledFunction sample_coefficient(std::shared_ptr<const QuadratureRule> rule, const IrrepLabel& label,
                                   int i, int j) {
  return sample(rule, [&](const GroupPoint& x) { return rep_matrix(label, x)(i, j); });
}

SpectralTable::SpectralTable(std::shared_ptr<const QuadratureRule> rule, std::vector<IrrepInfo> duals)
    : rule_(std::move(rule)), duals_(std::move(duals)) {
  const int need = max_band(duals_);
  if (need > rule_->bandlimit) {
    throw NumericalGuardError("quadrature bandlimit " + std::to_string(rule_->bandlimit) +
                              " cannot resolve duals of band " + std::to_string(need));
  }
  offsets_.reserve(duals_.size() + 1);
  std::size_t n = 0;
  for (const IrrepInfo& info : duals_) {
    require_group(info.label.group, rule_->group, "spectral table");
    offsets_.push_back(n);
    n += static_cast<std::size_t>(info.dim) * info.dim;
  }
  offsets_.push_back(n);
  const std::size_t nodes = rule_->size();
  values_.resize(static_cast<Eigen::Index>(nodes), static_cast<Eigen::Index>(n));

  const GroupId& g = rule_->group;
  if (g.is_torus()) {
    parallel_for(nodes, [&](std::size_t i) {
      const Eigen::VectorXd& x = rule_->nodes[i].coords;
      for (std::size_t p = 0; p < duals_.size(); ++p) {
        double phase = 0;
        const std::vector<int>& k = duals_[p].label.index;
        for (std::size_t c = 0; c < k.size(); ++c) phase += k[c] * x(static_cast<Eigen::Index>(c));
        values_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(offsets_[p])) =
            std::polar(1.0, 2 * std::numbers::pi * phase);
      }
    });
    return;
  }

  int two_jmax = 0;
  for (const IrrepInfo& info : duals_) two_jmax = std::max(two_jmax, info.label.two_l());
  std::map<double, std::size_t> theta_slot;
  std::vector<std::size_t> node_slot(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    const double theta = rule_->nodes[i].coords(1);
    node_slot[i] = theta_slot.emplace(theta, theta_slot.size()).first->second;
  }
  std::vector<std::vector<Eigen::MatrixXd>> small_d(theta_slot.size());
  std::vector<double> thetas(theta_slot.size());
  for (const auto& [theta, slot] : theta_slot) thetas[slot] = theta;
  parallel_for(thetas.size(), [&](std::size_t s) { small_d[s] = wigner_small_d_table(two_jmax, thetas[s]); });

  parallel_for(nodes, [&](std::size_t i) {
    const Eigen::VectorXd& x = rule_->nodes[i].coords;
    // phases e^{-i m phi}, e^{-i m psi} indexed by 2m + two_jmax, both parities
    std::vector<Complex> left(2 * two_jmax + 1), right(2 * two_jmax + 1);
    for (int t = 0; t <= 2 * two_jmax; ++t) {
      const double m = (t - two_jmax) / 2.0;
      left[t] = std::polar(1.0, -m * x(0));
      right[t] = std::polar(1.0, -m * x(2));
    }
    const std::vector<Eigen::MatrixXd>& dtab = small_d[node_slot[i]];
    for (std::size_t p = 0; p < duals_.size(); ++p) {
      const int tj = duals_[p].label.two_l();
      const int d = tj + 1;
      const int shift = two_jmax - tj;
      const Eigen::MatrixXd& dm = dtab[tj];
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
          values_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(offsets_[p] + a * d + b)) =
              left[2 * a + shift] * dm(a, b) * right[2 * b + shift];
    }
  });
}

Eigen::MatrixXcd SpectralTable::analyze(const Eigen::MatrixXcd& samples) const {
  const Eigen::Map<const Eigen::VectorXd> w(rule_->weights.data(), static_cast<Eigen::Index>(rule_->weights.size()));
  if (samples.rows() != w.size()) throw std::invalid_argument("sample count does not match rule");
  return values_.adjoint() * (w.cast<Complex>().asDiagonal() * samples);
}

Eigen::MatrixXcd SpectralTable::synthesize(const Eigen::MatrixXcd& coeffs) const {
  if (coeffs.rows() != values_.cols()) throw std::invalid_argument("coefficient length does not match table");
  Eigen::VectorXcd dims(values_.cols());
  for (std::size_t p = 0; p < duals_.size(); ++p)
    dims.segment(static_cast<Eigen::Index>(offsets_[p]), static_cast<Eigen::Index>(offsets_[p + 1] - offsets_[p]))
        .setConstant(static_cast<double>(duals_[p].dim));
  return values_ * (dims.asDiagonal() * coeffs);
}

FourierCoefficients SpectralTable::to_blocks(const Eigen::VectorXcd& coeffs, double cutoff) const {
  FourierCoefficients out;
  out.group = rule_->group;
  out.cutoff = cutoff;
  out.duals = duals_;
  out.blocks.reserve(duals_.size());
  for (std::size_t p = 0; p < duals_.size(); ++p) {
    const int d = duals_[p].dim;
    out.blocks.emplace_back(Eigen::Map<const Eigen::MatrixXcd>(coeffs.data() + offsets_[p], d, d));
  }
  return out;
}

Eigen::VectorXcd SpectralTable::from_blocks(const BlockSeries& series) const {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(values_.cols());
  for (std::size_t p = 0; p < duals_.size(); ++p) {
    const int d = duals_[p].dim;
    Eigen::Map<Eigen::MatrixXcd>(v.data() + offsets_[p], d, d) = series.at(duals_[p].label);
  }
  return v;
}

Eigen::MatrixXcd SpectralTable::apply_symbol(const InvariantSymbol& sym, const Eigen::MatrixXcd& coeffs) const {
  Eigen::MatrixXcd out(coeffs.rows(), coeffs.cols());
  for (std::size_t p = 0; p < duals_.size(); ++p) {
    const int d = duals_[p].dim;
    const Eigen::MatrixXcd& s = sym.at(duals_[p].label);
    for (Eigen::Index c = 0; c < coeffs.cols(); ++c) {
      Eigen::Map<const Eigen::MatrixXcd> in(coeffs.col(c).data() + offsets_[p], d, d);
      Eigen::Map<Eigen::MatrixXcd>(out.col(c).data() + offsets_[p], d, d).noalias() = s * in;
    }
  }
  return out;
}

FourierCoefficients forward_transform(const SampledFunction& f, const std::vector<IrrepInfo>& duals) {
  SpectralTable table(f.rule, duals);
  double cutoff = 1;
  for (const IrrepInfo& i : duals) cutoff = std::max(cutoff, i.weight);
  return table.to_blocks(table.analyze(f.values), cutoff);
}

Complex inverse_transform(const BlockSeries& coeffs, const GroupPoint& x) {
  Complex sum = 0;
  for (std::size_t p = 0; p < coeffs.duals.size(); ++p) {
    const IrrepInfo& info = coeffs.duals[p];
    sum += static_cast<double>(info.dim) * (rep_matrix(info.label, x) * coeffs.blocks[p]).trace();
  }
  return sum;
}

double l2_norm_from_coeffs(const BlockSeries& coeffs) {
  double s = 0;
  for (std::size_t p = 0; p < coeffs.duals.size(); ++p) s += coeffs.duals[p].dim * coeffs.blocks[p].squaredNorm();
  return std::sqrt(s);
}

Complex inner_product_from_coeffs(const BlockSeries& f, const BlockSeries& g) {
  Complex s = 0;
  for (std::size_t p = 0; p < f.duals.size(); ++p) {
    s += static_cast<double>(f.duals[p].dim) * (f.blocks[p] * g.at(f.duals[p].label).adjoint()).trace();
  }
  return s;
}

double quadrature_l2_norm(const SampledFunction& f) {
  double s = 0;
  for (std::size_t i = 0; i < f.rule->size(); ++i) s += f.rule->weights[i] * std::norm(f.values(static_cast<Eigen::Index>(i)));
  return std::sqrt(s);
}

Complex quadrature_inner_product(const SampledFunction& f, const SampledFunction& g) {
  Complex s = 0;
  for (std::size_t i = 0; i < f.rule->size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    s += f.rule->weights[i] * f.values(k) * std::conj(g.values(k));
  }
  return s;
}

SampledFunction apply_invariant_operator(const InvariantSymbol& sym, const SampledFunction& f) {
  require_group(sym.group, f.rule->group, "apply_invariant_operator");
  SpectralTable table(f.rule, sym.duals);
  const Eigen::MatrixXcd coeffs = table.analyze(f.values);
  return {f.rule, table.synthesize(table.apply_symbol(sym, coeffs)).col(0)};
}

SymbolExtraction symbol_of_operator(const BlackBoxOperator& apply, const std::vector<IrrepInfo>& duals,
                                    std::shared_ptr<const QuadratureRule> rule) {
  if (rule->size() < 2) throw std::invalid_argument("symbol extraction needs at least two nodes");
  // second probe: the first node past the middle whose coordinates all differ from node 0
  const std::size_t n = rule->size();
  std::size_t second = n / 2 + 1 < n ? n / 2 + 1 : 1;
  for (std::size_t step = 0; step < n; ++step) {
    const std::size_t cand = (n / 2 + 1 + step) % n;
    const Eigen::VectorXd diff = rule->nodes[cand].coords - rule->nodes.front().coords;
    if (diff.cwiseAbs().minCoeff() > 0) {
      second = cand;
      break;
    }
  }
  const GroupPoint& x0 = rule->nodes.front();
  const GroupPoint& x1 = rule->nodes[second];
  const Eigen::Index i0 = 0;
  const auto i1 = static_cast<Eigen::Index>(second);

  SymbolExtraction out;
  out.symbol.group = rule->group;
  out.symbol.duals = duals;
  out.symbol.cutoff = 1;
  double scale = 1;
  for (const IrrepInfo& info : duals) {
    require_group(info.label.group, rule->group, "symbol_of_operator");
    const int d = info.dim;
    Eigen::MatrixXcd a0(d, d), a1(d, d);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        const SampledFunction image = apply(sample_coefficient(rule, info.label, i, j));
        a0(i, j) = image.values(i0);
        a1(i, j) = image.values(i1);
      }
    }
    Eigen::MatrixXcd s0 = rep_matrix(info.label, x0).adjoint() * a0;
    const Eigen::MatrixXcd s1 = rep_matrix(info.label, x1).adjoint() * a1;
    out.invariance_defect = std::max(out.invariance_defect, (s1 - s0).cwiseAbs().maxCoeff());
    scale = std::max(scale, s0.cwiseAbs().maxCoeff());
    out.symbol.cutoff = std::max(out.symbol.cutoff, info.weight);
    out.symbol.blocks.push_back(std::move(s0));
  }
  out.invariant = out.invariance_defect <= 1e-6 * scale;
  return out;
}

Complex kernel_of_invariant(const InvariantSymbol& sym, const GroupPoint& x, const GroupPoint& y) {
  Complex sum = 0;
  for (std::size_t p = 0; p < sym.duals.size(); ++p) {
    const IrrepInfo& info = sym.duals[p];
    sum += static_cast<double>(info.dim) *
           (rep_matrix(info.label, x) * sym.blocks[p] * rep_matrix(info.label, y).adjoint()).trace();
  }
  return sum;
}

Eigen::MatrixXcd kernel_matrix(const InvariantSymbol& sym, std::shared_ptr<const QuadratureRule> rule) {
  require_group(sym.group, rule->group, "kernel_matrix");
  SpectralTable table(rule, sym.duals);
  const Eigen::MatrixXcd& phi = table.values();
  Eigen::MatrixXcd psi(phi.rows(), phi.cols());
  for (std::size_t p = 0; p < sym.duals.size(); ++p) {
    const int d = sym.duals[p].dim;
    for (int a = 0; a < d; ++a) {
      const auto col = static_cast<Eigen::Index>(table.offset(p) + a * d);
      psi.middleCols(col, d).noalias() = static_cast<double>(d) * phi.middleCols(col, d) * sym.blocks[p];
    }
  }
  return psi * phi.adjoint();
}

Eigen::VectorXcd kernel_profile(const InvariantSymbol& sym, std::shared_ptr<const QuadratureRule> rule) {
  require_group(sym.group, rule->group, "kernel_profile");
  const GroupId& g = rule->group;
  if (g.is_torus() && g.n == 1 && rule->grid_points > 0 && fft_friendly(rule->grid_points) &&
      max_band(sym.duals) <= rule->bandlimit) {
    // uniform grid x_j = j/M: k(x_j) = sum_k sigma_k e^{2 pi i j k / M}
    const int m = rule->grid_points;
    std::vector<Complex> spectrum(m, Complex(0)), profile;
    for (std::size_t p = 0; p < sym.duals.size(); ++p) {
      const int k = sym.duals[p].label.index[0];
      spectrum[static_cast<std::size_t>(((k % m) + m) % m)] += sym.blocks[p](0, 0);
    }
    Eigen::FFT<double> fft;
    fft.SetFlag(Eigen::FFT<double>::Unscaled);
    fft.inv(profile, spectrum);
    return Eigen::Map<const Eigen::VectorXcd>(profile.data(), m);
  }
  if (rule->size() * basis_size(sym.duals) <= kTableBudget) {
    SpectralTable table(rule, sym.duals);
    return table.synthesize(table.from_blocks(sym)).col(0);
  }
  Eigen::VectorXcd out(static_cast<Eigen::Index>(rule->size()));
  const GroupPoint e = identity(g);
  parallel_for(rule->size(), [&](std::size_t i) {
    out(static_cast<Eigen::Index>(i)) = kernel_of_invariant(sym, rule->nodes[i], e);
  });
  return out;
}

double kernel_lp_norm(const InvariantSymbol& sym, double p, std::shared_ptr<const QuadratureRule> rule) {
  if (!(p >= 1)) throw std::invalid_argument("kernel_lp_norm needs p >= 1");
  const Eigen::VectorXcd k = kernel_profile(sym, rule);
  if (std::isinf(p)) return k.size() ? k.cwiseAbs().maxCoeff() : 0.0;
  double s = 0;
  for (Eigen::Index i = 0; i < k.size(); ++i) s += rule->weights[static_cast<std::size_t>(i)] * std::pow(std::abs(k(i)), p);
  return std::pow(s, 1.0 / p);
}

}  // namespace lieschatten

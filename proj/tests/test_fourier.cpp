#include "lieschatten/error.hpp"
#include "lieschatten/families.hpp"
#include "lieschatten/fourier.hpp"

#include "test_util.hpp"

#include <doctest.h>

using namespace lieschatten;

namespace {

std::shared_ptr<const QuadratureRule> rule_for(const GroupId& g, int band) {
  return std::make_shared<QuadratureRule>(haar_quadrature(g, band));
}

FourierCoefficients random_coefficients(const GroupId& g, int band, std::mt19937_64& rng) {
  FourierCoefficients c;
  c.group = g;
  c.duals = enumerate_dual_band(g, band);
  for (const IrrepInfo& i : c.duals) {
    c.blocks.push_back(testutil::random_matrix(i.dim, i.dim, rng));
    c.cutoff = std::max(c.cutoff, i.weight);
  }
  return c;
}

SampledFunction synthesize_at_nodes(const FourierCoefficients& c, std::shared_ptr<const QuadratureRule> rule) {
  return sample(rule, [&](const GroupPoint& x) { return inverse_transform(c, x); });
}

double max_block_diff(const BlockSeries& a, const BlockSeries& b) {
  double m = 0;
  REQUIRE(a.size() == b.size());
  for (std::size_t p = 0; p < a.size(); ++p) m = std::max(m, testutil::max_abs(a.blocks[p] - b.blocks[p]));
  return m;
}

const std::vector<GroupId> kGroups = {GroupId::torus(1), GroupId::torus(2), GroupId::su2(), GroupId::so3()};

}  // namespace

TEST_CASE("block series lookup and restriction") {
  const InvariantSymbol id = identity_symbol(GroupId::su2(), 3);
  CHECK(id.at(IrrepLabel::su2(2)).rows() == 3);
  CHECK_THROWS_AS(id.at(IrrepLabel::su2(9)), std::out_of_range);
  const InvariantSymbol r = id.restricted<InvariantSymbol>(2);
  CHECK(r.size() == 3);
  CHECK(r.cutoff == 2);
  CHECK(id.restricted<InvariantSymbol>(10).cutoff == 3);
  CHECK_THROWS_AS(make_symbol(GroupId::su2(), 2, [](const IrrepInfo&) { return Eigen::MatrixXcd::Identity(1, 1); }),
                  std::invalid_argument);
}

TEST_CASE("spectral table columns are orthogonal on mixed half-integer duals") {
  for (const GroupId& g : kGroups) {
    const auto rule = rule_for(g, 5);
    const SpectralTable t(rule, enumerate_dual_band(g, 5));
    const Eigen::Map<const Eigen::VectorXd> w(rule->weights.data(), static_cast<Eigen::Index>(rule->size()));
    const Eigen::MatrixXcd gram = t.values().adjoint() * w.cast<Complex>().asDiagonal() * t.values();
    Eigen::VectorXd expect(gram.rows());
    for (std::size_t p = 0; p < t.duals().size(); ++p)
      expect.segment(static_cast<Eigen::Index>(t.offset(p)), t.duals()[p].dim * t.duals()[p].dim)
          .setConstant(1.0 / t.duals()[p].dim);
    CHECK(testutil::max_abs(gram - Eigen::MatrixXcd(expect.cast<Complex>().asDiagonal())) < 1e-12);
  }
}

TEST_CASE("forward transform of constants and single coefficients") {
  for (const GroupId& g : kGroups) {
    const auto rule = rule_for(g, 4);
    const std::vector<IrrepInfo> duals = enumerate_dual_band(g, 4);
    const FourierCoefficients one = forward_transform(sample(rule, [](const GroupPoint&) { return Complex(1); }), duals);
    CHECK(std::abs(one.blocks[0](0, 0) - 1.0) < 1e-13);
    for (std::size_t p = 1; p < one.size(); ++p) CHECK(testutil::max_abs(one.blocks[p]) < 1e-13);

    const IrrepInfo& xi = duals.back();
    const int i = 0, j = xi.dim - 1;
    const FourierCoefficients c = forward_transform(sample_coefficient(rule, xi.label, i, j), duals);
    for (std::size_t p = 0; p < c.size(); ++p) {
      Eigen::MatrixXcd expect = Eigen::MatrixXcd::Zero(duals[p].dim, duals[p].dim);
      if (duals[p].label == xi.label) expect(j, i) = 1.0 / xi.dim;
      CHECK(testutil::max_abs(c.blocks[p] - expect) < 1e-13);
    }
  }
  const GroupId t1 = GroupId::torus(1);
  const auto rule = rule_for(t1, 3);
  const FourierCoefficients e = forward_transform(
      sample(rule, [](const GroupPoint& x) { return std::polar(1.0, 2 * testutil::kPi * x.coords(0)); }),
      enumerate_dual_band(t1, 3));
  CHECK(std::abs(e.at(IrrepLabel::torus({1}))(0, 0) - 1.0) < 1e-14);
  CHECK(std::abs(e.at(IrrepLabel::torus({-1}))(0, 0)) < 1e-14);
}

TEST_CASE("forward transform refuses coarse rules") {
  const auto rule = rule_for(GroupId::su2(), 3);
  const SampledFunction f = sample(rule, [](const GroupPoint&) { return Complex(1); });
  CHECK_THROWS_AS(forward_transform(f, enumerate_dual_band(GroupId::su2(), 4)), NumericalGuardError);
  CHECK_NOTHROW(forward_transform(f, enumerate_dual_band(GroupId::su2(), 3)));
}

TEST_CASE("inverse transform") {
  const GroupId t1 = GroupId::torus(1);
  const InvariantSymbol ones = identity_symbol(t1, std::sqrt(1.0 + 25));
  CHECK(std::abs(inverse_transform(ones, identity(t1)) - 11.0) < 1e-12);
  std::mt19937_64 rng(5);
  for (const GroupId& g : kGroups) {
    FourierCoefficients one = random_coefficients(g, 2, rng);
    for (auto& b : one.blocks) b.setZero();
    one.blocks[0](0, 0) = 1;
    CHECK(std::abs(inverse_transform(one, testutil::random_point(g, rng)) - 1.0) < 1e-14);

    const auto rule = rule_for(g, 4);
    const FourierCoefficients c = random_coefficients(g, 4, rng);
    const SampledFunction f = synthesize_at_nodes(c, rule);
    const FourierCoefficients back = forward_transform(f, c.duals);
    CHECK(max_block_diff(back, c) < 1e-11);
    for (std::size_t i = 0; i < rule->size(); i += 7)
      CHECK(std::abs(inverse_transform(back, rule->nodes[i]) - f.values(static_cast<Eigen::Index>(i))) < 1e-9);
  }
}

TEST_CASE("Parseval and Plancherel") {
  std::mt19937_64 rng(6);
  for (const GroupId& g : kGroups) {
    const auto rule = rule_for(g, 3);
    for (int t = 0; t < 5; ++t) {
      const FourierCoefficients a = random_coefficients(g, 3, rng), b = random_coefficients(g, 3, rng);
      const SampledFunction fa = synthesize_at_nodes(a, rule), fb = synthesize_at_nodes(b, rule);
      CHECK(l2_norm_from_coeffs(a) == doctest::Approx(quadrature_l2_norm(fa)).epsilon(1e-11));
      const Complex ip = quadrature_inner_product(fa, fb);
      CHECK(std::abs(inner_product_from_coeffs(a, b) - ip) < 1e-10 * std::abs(ip) + 1e-12);
    }
    const SampledFunction one = sample(rule, [](const GroupPoint&) { return Complex(1); });
    CHECK(l2_norm_from_coeffs(forward_transform(one, enumerate_dual_band(g, 3))) == doctest::Approx(1));
    const IrrepInfo xi = enumerate_dual_band(g, 3).back();
    SampledFunction basis = sample_coefficient(rule, xi.label, 0, 0);
    basis.values *= std::sqrt(static_cast<double>(xi.dim));
    CHECK(l2_norm_from_coeffs(forward_transform(basis, enumerate_dual_band(g, 3))) == doctest::Approx(1));
  }
}

TEST_CASE("left translation multiplies coefficients by xi(y)^*") {
  std::mt19937_64 rng(7);
  for (const GroupId& g : kGroups) {
    const auto rule = rule_for(g, 3);
    const FourierCoefficients c = random_coefficients(g, 3, rng);
    const GroupPoint y = testutil::random_point(g, rng);
    const GroupPoint y_inv = inverse(y);
    const SampledFunction shifted = sample(rule, [&](const GroupPoint& x) { return inverse_transform(c, multiply(y_inv, x)); });
    const FourierCoefficients hat = forward_transform(shifted, c.duals);
    for (std::size_t p = 0; p < c.size(); ++p)
      CHECK(testutil::max_abs(hat.blocks[p] - c.blocks[p] * rep_matrix(c.duals[p].label, y).adjoint()) < 1e-9);
  }
}

TEST_CASE("quantization of invariant symbols") {
  std::mt19937_64 rng(8);
  for (const GroupId& g : kGroups) {
    const auto rule = rule_for(g, 3);
    const FourierCoefficients c = random_coefficients(g, 3, rng);
    const SampledFunction f = synthesize_at_nodes(c, rule);
    const std::vector<IrrepInfo> duals = enumerate_dual_band(g, 3);
    const SampledFunction same = apply_invariant_operator(
        make_symbol(duals, [](const IrrepInfo& i) { return Eigen::MatrixXcd::Identity(i.dim, i.dim).eval(); }), f);
    const SampledFunction none = apply_invariant_operator(
        make_symbol(duals, [](const IrrepInfo& i) { return Eigen::MatrixXcd::Zero(i.dim, i.dim).eval(); }), f);
    CHECK(testutil::max_abs(same.values - f.values) < 1e-9);
    CHECK(testutil::max_abs(none.values) == 0.0);
  }
  const GroupId t1 = GroupId::torus(1);
  const auto rule = rule_for(t1, 2);
  const SampledFunction e1 =
      sample(rule, [](const GroupPoint& x) { return std::polar(1.0, 2 * testutil::kPi * x.coords(0)); });
  const SampledFunction half = apply_invariant_operator(bessel_symbol(t1, 2, 2.5), e1);
  CHECK(testutil::max_abs(half.values - 0.5 * e1.values) < 1e-14);
  CHECK_THROWS_AS(apply_invariant_operator(identity_symbol(t1, 4), e1), NumericalGuardError);
}

TEST_CASE("symbol of the identity map and of a convolution") {
  for (const GroupId& g : {GroupId::torus(1), GroupId::su2(), GroupId::so3()}) {
    const auto rule = rule_for(g, 4);
    const std::vector<IrrepInfo> duals = enumerate_dual_band(g, 4);
    const SymbolExtraction id = symbol_of_operator([](const SampledFunction& f) { return f; }, duals, rule);
    CHECK(id.invariant);
    for (std::size_t p = 0; p < duals.size(); ++p)
      CHECK(testutil::max_abs(id.symbol.blocks[p] - Eigen::MatrixXcd::Identity(duals[p].dim, duals[p].dim)) < 1e-11);
  }
  std::mt19937_64 rng(9);
  for (const GroupId& g : {GroupId::torus(1), GroupId::su2(), GroupId::so3()}) {
    // kernel of band 2, functions of band 2: products stay within the band-4 rule
    const FourierCoefficients k = random_coefficients(g, 2, rng);
    const auto rule = rule_for(g, 4);
    const std::vector<IrrepInfo> duals = enumerate_dual_band(g, 2);
    const SymbolExtraction conv =
        symbol_of_operator(convolution_operator([&](const GroupPoint& x) { return inverse_transform(k, x); }), duals, rule);
    const FourierCoefficients khat =
        forward_transform(sample(rule, [&](const GroupPoint& x) { return inverse_transform(k, x); }), duals);
    CHECK(conv.invariant);
    CHECK(max_block_diff(conv.symbol, khat) < 1e-9);
    CHECK(max_block_diff(conv.symbol, k) < 1e-9);
  }
}

TEST_CASE("multiplication operators are flagged as non-invariant") {
  const GroupId g = GroupId::su2();
  const auto rule = rule_for(g, 4);
  const BlackBoxOperator mult = [](const SampledFunction& f) {
    SampledFunction out = f;
    for (std::size_t i = 0; i < f.rule->size(); ++i) out.values(static_cast<Eigen::Index>(i)) *= std::cos(f.rule->nodes[i].coords(1));
    return out;
  };
  const SymbolExtraction s = symbol_of_operator(mult, enumerate_dual_band(g, 2), rule);
  CHECK_FALSE(s.invariant);
  CHECK(s.invariance_defect > 1e-6);
}

TEST_CASE("kernels of invariant symbols") {
  const GroupId t1 = GroupId::torus(1);
  const int kmax = 4;
  const InvariantSymbol id = identity_symbol(t1, std::sqrt(1.0 + kmax * kmax));
  for (double x : {0.1, 0.37}) {
    for (double y : {0.0, 0.8}) {
      const double u = x - y;
      const double dirichlet = std::sin((2 * kmax + 1) * testutil::kPi * u) / std::sin(testutil::kPi * u);
      const Complex k = kernel_of_invariant(id, GroupPoint::make(t1, Eigen::VectorXd::Constant(1, x)),
                                            GroupPoint::make(t1, Eigen::VectorXd::Constant(1, y)));
      CHECK(std::abs(k - dirichlet) < 1e-12);
    }
  }
  const InvariantSymbol bes = bessel_symbol(t1, 1.5, std::sqrt(1.0 + kmax * kmax));
  double diag = 0;
  for (int k = -kmax; k <= kmax; ++k) diag += std::pow(1.0 + k * k, -0.75);
  for (double x : {0.0, 0.3, 0.9}) {
    const GroupPoint p = GroupPoint::make(t1, Eigen::VectorXd::Constant(1, x));
    CHECK(std::abs(kernel_of_invariant(bes, p, p) - diag) < 1e-12);
  }
  CHECK(std::abs(kernel_of_invariant(zero_symbol(GroupId::su2(), 3), identity(GroupId::su2()),
                                     GroupPoint::euler(GroupId::su2(), 1, 1, 1))) == 0.0);
}

TEST_CASE("kernels are left-invariant, and right-invariant for central symbols") {
  std::mt19937_64 rng(10);
  for (const GroupId& g : kGroups) {
    const FourierCoefficients raw = random_coefficients(g, 3, rng);
    InvariantSymbol sym;
    static_cast<BlockSeries&>(sym) = raw;
    const InvariantSymbol central = bessel_symbol(g, 1, 3);
    for (int t = 0; t < 5; ++t) {
      const GroupPoint x = testutil::random_point(g, rng), y = testutil::random_point(g, rng),
                       z = testutil::random_point(g, rng);
      const Complex k = kernel_of_invariant(sym, x, y);
      CHECK(std::abs(kernel_of_invariant(sym, multiply(z, x), multiply(z, y)) - k) < 1e-9);
      const Complex c = kernel_of_invariant(central, x, y);
      CHECK(std::abs(kernel_of_invariant(central, multiply(x, z), multiply(y, z)) - c) < 1e-9);
      CHECK(std::abs(kernel_of_invariant(sym, multiply(inverse(y), x), identity(g)) - k) < 1e-9);
    }
  }
}

TEST_CASE("kernel matrix and profile agree with pointwise kernels") {
  std::mt19937_64 rng(13);
  for (const GroupId& g : kGroups) {
    const FourierCoefficients raw = random_coefficients(g, 2, rng);
    InvariantSymbol sym;
    static_cast<BlockSeries&>(sym) = raw;
    const auto rule = rule_for(g, 2);
    const Eigen::MatrixXcd km = kernel_matrix(sym, rule);
    const Eigen::VectorXcd prof = kernel_profile(sym, rule);
    const GroupPoint e = identity(g);
    for (std::size_t i = 0; i < rule->size(); i += 5) {
      CHECK(std::abs(prof(static_cast<Eigen::Index>(i)) - kernel_of_invariant(sym, rule->nodes[i], e)) < 1e-11);
      for (std::size_t j = 0; j < rule->size(); j += 11)
        CHECK(std::abs(km(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) -
                       kernel_of_invariant(sym, rule->nodes[i], rule->nodes[j])) < 1e-11);
    }
  }
}

TEST_CASE("kernel profile on large torus grids") {
  const GroupId t1 = GroupId::torus(1);
  const int kmax = 300;
  const InvariantSymbol sym = convolution_symbol(
      t1, [](const std::vector<int>& k) { return Complex(carleman_coefficient(k), 0.1 * k[0]); },
      std::sqrt(1.0 + kmax * kmax));
  for (int points : {1024, 2 * kmax + 1, 607}) {
    const auto rule = std::make_shared<QuadratureRule>(torus_quadrature(1, kmax, points));
    const Eigen::VectorXcd prof = kernel_profile(sym, rule);
    const GroupPoint e = identity(t1);
    for (std::size_t i = 0; i < rule->size(); i += 97)
      CHECK(std::abs(prof(static_cast<Eigen::Index>(i)) - kernel_of_invariant(sym, rule->nodes[i], e)) < 1e-9);
  }
}

TEST_CASE("kernel Lp norms") {
  const GroupId t1 = GroupId::torus(1);
  for (int kmax : {0, 3, 10}) {
    const auto rule = rule_for(t1, kmax);
    const double cut = std::sqrt(1.0 + kmax * kmax);
    CHECK(kernel_lp_norm(identity_symbol(t1, cut), 2, rule) == doctest::Approx(std::sqrt(2.0 * kmax + 1)).epsilon(1e-12));
    double s = 0;
    for (int k = -kmax; k <= kmax; ++k) s += std::pow(1.0 + k * k, -2);
    CHECK(kernel_lp_norm(bessel_symbol(t1, 2, cut), 2, rule) == doctest::Approx(std::sqrt(s)).epsilon(1e-12));
    CHECK(kernel_lp_norm(zero_symbol(t1, cut), 2, rule) == 0.0);
  }
  const auto rule = rule_for(t1, 3);
  const InvariantSymbol id = identity_symbol(t1, std::sqrt(10.0));
  CHECK(kernel_lp_norm(id, std::numeric_limits<double>::infinity(), rule) == doctest::Approx(7));
  CHECK(kernel_lp_norm(id, 1, rule) <= kernel_lp_norm(id, 2, rule));
  CHECK_THROWS_AS(kernel_lp_norm(id, 0.5, rule), std::invalid_argument);
}

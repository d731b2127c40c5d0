#include "innerapprox/hull.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace innerapprox;

namespace {

Colligation blaschke_atom(Complex alpha) {
  return product_colligation(BlaschkePotapovProduct{CMatrix::Identity(1, 1), {{alpha, CMatrix::Identity(1, 1)}}});
}

Colligation identity_map() { return blaschke_atom(0.0); }

DiscFunction scalar(std::function<Complex(Complex)> f) {
  return [f](Complex z) { return CMatrix(CMatrix::Constant(1, 1, f(z))); };
}

double weight_sum(const ConvexCombination& c) {
  double s = 0.0;
  for (double w : c.weights) s += w;
  return s;
}

double boundary_error(const ConvexCombination& c, const DiscFunction& f, std::size_t n = 512) {
  return measure_residual(c, f, CircleGrid(n).points);
}

}  // namespace

TEST(Mobius, ComposeIsInnerAndMatches) {
  const BlaschkePotapovProduct prod = random_inner(2, 3, 5);
  const Colligation g = product_colligation(prod);
  const Complex a(0.3, -0.4);
  const Colligation m = mobius_compose(g, a);
  EXPECT_TRUE(is_unitary(m.system_matrix(), 1e-12).ok);
  for (const auto& z : CircleGrid(16, 0.7).points) {
    const CMatrix gz = eval_bp_product(prod, z);
    const CMatrix expected = (gz + a * CMatrix::Identity(2, 2)) * (CMatrix::Identity(2, 2) + std::conj(a) * gz).inverse();
    EXPECT_LT(operator_norm(eval_transfer_disc(m, z) - expected), 1e-12);
  }
}

TEST(ScaleAverage, IdentityMap) {
  const double s = std::sqrt(0.3);
  const ConvexCombination c = scale_average_atoms(identity_map(), s, 16);
  EXPECT_EQ(c.size(), 16u);
  EXPECT_NEAR(weight_sum(c), 1.0, 1e-12);
  EXPECT_LE(boundary_error(c, scalar([](Complex z) { return 0.7 * z; })), 1e-3);
  EXPECT_NEAR(c.residual, 2.0 * std::pow(s, 16) / (1.0 - std::pow(s, 16)), 1e-15);
  for (const auto& a : c.atoms) EXPECT_TRUE(is_inner_on_circle(as_function(a), CircleGrid(256), 1e-8).ok);
}

TEST(ScaleAverage, ConstantUnitary) {
  Rng rng(3);
  const CMatrix u = random_unitary(2, rng);
  const Colligation g(u, CMatrix::Zero(2, 0), CMatrix::Zero(0, 2), CMatrix::Zero(0, 0));
  const double s = 0.55;
  const ConvexCombination c = scale_average_atoms(g, s, 16);
  EXPECT_LE(operator_norm(c(0.2) - (1.0 - s * s) * u), c.residual);
}

TEST(ScaleAverage, BlaschkeTarget) {
  const ConvexCombination c = scale_average_atoms(blaschke_atom(0.3), std::sqrt(0.3), 16);
  EXPECT_LE(boundary_error(c, scalar([](Complex z) { return 0.7 * eval_blaschke(0.3, z); })), 1e-3);
}

TEST(ScaleAverage, TailBoundGrid) {
  const Colligation g = product_colligation(random_inner(2, 2, 77));
  const DiscFunction fg = as_function(g);
  const HullGrid grid;
  for (double s : {0.3, 0.55, 0.8})
    for (std::size_t m : {8u, 16u, 32u}) {
      const ConvexCombination c = scale_average_atoms(g, s, m);
      const DiscFunction target = [&](Complex z) { return CMatrix((1.0 - s * s) * fg(z)); };
      EXPECT_LE(measure_residual(c, target, grid.points()), c.residual + 1e-12) << s << " " << m;
    }
}

TEST(ScaleAverage, RejectsNonInner) {
  const Colligation half(CMatrix::Zero(1, 1), CMatrix::Ones(1, 1), CMatrix::Constant(1, 1, 0.5), CMatrix::Zero(1, 1));
  try {
    scale_average_atoms(half, 0.5, 8);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotInner);
  }
}

TEST(Combine, Trivial) {
  ConvexCombination a, b;
  a.atoms = {blaschke_atom(0.2)};
  a.weights = {1.0};
  b.atoms = {blaschke_atom(-0.4)};
  b.weights = {1.0};
  const ConvexCombination ab = combine_products(a, b);
  EXPECT_EQ(ab.size(), 1u);
  EXPECT_NEAR(std::abs(ab(0.3)(0, 0) - eval_blaschke(0.2, 0.3) * eval_blaschke(-0.4, 0.3)), 0.0, 1e-14);
  const ConvexCombination c2 = scale_average_atoms(identity_map(), 0.5, 2);
  const ConvexCombination four = combine_products(c2, c2);
  EXPECT_EQ(four.size(), 4u);
  EXPECT_NEAR(weight_sum(four), 1.0, 1e-15);
}

TEST(Combine, ResidualSubadditive) {
  const Complex a1(0.3, 0.1), a2(-0.2, 0.5);
  const double s = 0.5;
  const ConvexCombination l = scale_average_atoms(blaschke_atom(a1), s, 16);
  const ConvexCombination r = scale_average_atoms(blaschke_atom(a2), s, 16);
  const ConvexCombination lr = combine_products(l, r);
  const double k = 1.0 - s * s;
  const DiscFunction target = scalar([&](Complex z) { return k * k * eval_blaschke(a1, z) * eval_blaschke(a2, z); });
  const HullGrid grid;
  EXPECT_LE(measure_residual(lr, target, grid.points()), l.residual + r.residual + 1e-10);
}

TEST(Combine, DimensionMismatch) {
  ConvexCombination a, b;
  a.atoms = {blaschke_atom(0.2)};
  a.weights = {1.0};
  b.atoms = {product_colligation(random_inner(2, 1, 1))};
  b.weights = {1.0};
  try {
    combine_products(a, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
  }
}

TEST(UnitaryMultiply, Cases) {
  const Colligation g = product_colligation(random_inner(2, 2, 8));
  const ConvexCombination c = scale_average_atoms(g, 0.5, 2);
  const ConvexCombination same = unitary_left_multiply(CMatrix::Identity(2, 2), c);
  EXPECT_LT(operator_norm(same(0.4) - c(0.4)), 1e-15);
  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = Complex(0, 1);
  d(1, 1) = -1.0;
  const ConvexCombination dc = unitary_left_multiply(d, c);
  EXPECT_LT(operator_norm(dc(0.4) - d * c(0.4)), 1e-14);
  Rng rng(12);
  const CMatrix u = random_unitary(2, rng);
  const DiscFunction fg = as_function(g);
  const DiscFunction target = [&](Complex z) { return CMatrix(0.75 * fg(z)); };
  const DiscFunction utarget = [&](Complex z) { return CMatrix(0.75 * u * fg(z)); };
  const ConvexCombination big = scale_average_atoms(g, 0.5, 16);
  const ConvexCombination ub = unitary_left_multiply(u, big);
  const auto pts = HullGrid().points();
  EXPECT_NEAR(measure_residual(ub, utarget, pts), measure_residual(big, target, pts), 1e-12);
  try {
    unitary_left_multiply(0.5 * CMatrix::Identity(2, 2), c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotUnitary);
  }
}

TEST(ConstantAverage, MatrixContraction) {
  Rng rng(6);
  const CMatrix k = random_contraction(3, 3, rng, 0.8);
  const ConvexCombination c = constant_average(k);
  EXPECT_LT(operator_norm(c(0.0) - k), 1e-14);
  for (const auto& a : c.atoms) EXPECT_TRUE(is_unitary(a.a, 1e-12).ok);
}

TEST(FrankWolfe, InnerTargetSingleAtom) {
  const Colligation g = blaschke_atom(0.3);
  std::vector<Colligation> pool = default_atom_pool(1, 4);
  pool.push_back(g);
  FwOptions opt;
  opt.tau = 1e-8;
  opt.budget = 10;
  const ConvexCombination c = fw_decompose(as_function(g), pool, opt);
  EXPECT_EQ(c.size(), 1u);
  EXPECT_LE(c.residual, 1e-8);
}

TEST(FrankWolfe, ScaledBlaschke) {
  const Colligation g = blaschke_atom(0.3);
  std::vector<Colligation> pool = default_atom_pool(1, 4);
  for (double s : {0.3, std::sqrt(0.3), 0.8}) {
    const ConvexCombination sa = scale_average_atoms(g, s, 16);
    pool.insert(pool.end(), sa.atoms.begin(), sa.atoms.end());
  }
  FwOptions opt;
  opt.budget = 64;
  opt.tau = 0.02;
  const ConvexCombination c = fw_decompose(scalar([](Complex z) { return 0.7 * eval_blaschke(0.3, z); }), pool, opt);
  EXPECT_LE(c.residual, 0.02);
  EXPECT_TRUE(c.converged);
  EXPECT_NEAR(weight_sum(c), 1.0, 1e-12);
}

TEST(FrankWolfe, ZeroTarget) {
  std::vector<Colligation> pool = default_atom_pool(1, 4);
  const DiscFunction zero = scalar([](Complex) { return Complex(0.0); });
  FwOptions two;
  two.budget = 1;
  two.tau = 0.0;
  const ConvexCombination c2 = fw_decompose(zero, pool, two);
  EXPECT_LE(c2.size(), 2u);
  EXPECT_LE(c2.residual, 0.25);
  FwOptions many;
  many.budget = 31;
  many.tau = 0.02;
  const ConvexCombination c32 = fw_decompose(zero, pool, many);
  EXPECT_LE(c32.size(), 32u);
  EXPECT_LE(c32.residual, 0.02);
}

TEST(FrankWolfe, ResidualNonIncreasingInBudget) {
  const Colligation g = blaschke_atom(Complex(0.2, 0.4));
  std::vector<Colligation> pool = default_atom_pool(1, 9);
  const ConvexCombination sa = scale_average_atoms(g, 0.6, 8);
  pool.insert(pool.end(), sa.atoms.begin(), sa.atoms.end());
  const DiscFunction target = scalar([](Complex z) { return 0.5 * eval_blaschke(Complex(0.2, 0.4), z); });
  double last = 1e9;
  for (std::size_t budget : {0u, 1u, 2u, 4u, 8u, 16u}) {
    FwOptions opt;
    opt.budget = budget;
    opt.tau = 0.0;
    const ConvexCombination c = fw_decompose(target, pool, opt);
    EXPECT_LE(c.residual, last + 1e-12);
    last = c.residual;
    EXPECT_NEAR(weight_sum(c), 1.0, 1e-12);
    for (double w : c.weights) EXPECT_GE(w, 0.0);
  }
}

TEST(Fisher, FactorIdentity) {
  // every BP factor of b_alpha(r z) is reproduced exactly by its three atoms
  ScaledProduct f;
  f.scale = 1.0 - 1e-3;
  f.product = random_inner(2, 2, 21);
  const FisherReport rep = fisher_pipeline(f, 0.05);
  EXPECT_LE(rep.combination.residual, 0.05);
  const DiscFunction fr = [&](Complex z) { return CMatrix(f.scale * eval_bp_product(f.product, rep.r * z)); };
  EXPECT_LT(measure_residual(rep.combination, fr, HullGrid().points()), 1e-12);
}

TEST(Fisher, InnerInput) {
  ScaledProduct f;
  f.product = random_inner(2, 3, 4);
  const FisherReport rep = fisher_pipeline(f, 0.1);
  EXPECT_EQ(rep.combination.size(), 1u);
  EXPECT_LE(rep.combination.residual, 1e-10);
}

TEST(Fisher, DiagonalExample) {
  CMatrix p1 = CMatrix::Zero(2, 2), p2 = CMatrix::Zero(2, 2);
  p1(0, 0) = 1.0;
  p2(1, 1) = 1.0;
  ScaledProduct f;
  f.scale = 0.9;
  f.product = BlaschkePotapovProduct{CMatrix::Identity(2, 2), {{0.0, p1}, {0.0, p1}, {0.2, p2}}};
  const FisherReport rep = fisher_pipeline(f, 0.1);
  EXPECT_LE(rep.combination.residual, 0.1);
  EXPECT_LE(rep.combination.size(), 200u);
  EXPECT_NEAR(weight_sum(rep.combination), 1.0, 1e-12);
  for (const auto& a : rep.combination.atoms) EXPECT_TRUE(is_inner_on_circle(as_function(a), CircleGrid(256), 1e-8).ok);
}

TEST(Fisher, ConstantPolynomial) {
  const FisherReport rep = fisher_pipeline(MatrixPolynomial({CMatrix::Constant(1, 1, 0.5)}), 0.05);
  EXPECT_LE(rep.combination.residual, 0.05);
}

TEST(Fisher, PolynomialInput) {
  std::vector<CMatrix> c(3, CMatrix::Zero(2, 2));
  c[0] << 0.2, 0.1, 0.0, -0.3;
  c[1] << 0.3, 0.0, Complex(0, 0.2), 0.1;
  c[2] << 0.0, 0.25, 0.1, 0.2;
  MatrixPolynomial p(c);
  const double s = sup_norm_estimate(as_function(p), CircleGrid(4096)).value;
  for (auto& m : p.coeffs) m *= 0.95 / s;
  const FisherReport rep = fisher_pipeline(p, 0.1);
  EXPECT_LE(rep.combination.residual, 0.1);
  EXPECT_NEAR(weight_sum(rep.combination), 1.0, 1e-12);
  for (const auto& a : rep.combination.atoms) EXPECT_TRUE(is_unitary(a.system_matrix(), 1e-8).ok);
}

#include "innerapprox/indefinite.hpp"
#include "innerapprox/realization.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace innerapprox;

namespace {

CMatrix diag2(Complex a, Complex b) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

// J0-contractive rational function: inverse transform of a strict contraction
DiscFunction random_j_contractive(const SignatureSpace& sig, std::uint64_t seed) {
  const Colligation col = random_colligation(sig.size(), 2, seed, 0.9);
  return pg_inverse(as_function(col), sig);
}

std::vector<Complex> region_points() {
  std::vector<Complex> pts;
  for (int i = 1; i <= 9; ++i) {
    for (const auto& z : CircleGrid(64, 0.1 * i, 0.03).points)
      if (std::abs(z - 0.5) >= 0.1) pts.push_back(z);
  }
  for (const auto& e : CircleGrid(64, 0.1).points) pts.push_back(0.5 + e);
  return pts;
}

}  // namespace

TEST(PgTransform, Trivial) {
  const SignatureSpace sig(1, 1);
  EXPECT_LT((pg_transform(CMatrix::Identity(2, 2).eval(), sig) - CMatrix::Identity(2, 2)).norm(), 1e-15);
  EXPECT_LT((pg_transform(sig.j0, sig) - sig.j0).norm(), 1e-15);
  EXPECT_LT((pg_inverse(CMatrix::Identity(2, 2).eval(), sig) - CMatrix::Identity(2, 2)).norm(), 1e-15);
  EXPECT_LT((pg_inverse(sig.j0, sig) - sig.j0).norm(), 1e-15);
}

TEST(PgTransform, ContractiveImage) {
  const SignatureSpace sig(1, 2);
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    const CMatrix f = pg_inverse(random_contraction(3, 3, rng, 0.95), sig);
    ASSERT_LE(is_j_contractive([&](Complex) { return f; }, sig, {0.0}).violation, 1e-10);
    EXPECT_LE(operator_norm(pg_transform(f, sig)), 1.0 + 1e-10);
  }
}

TEST(PgTransform, RoundTripAndForms) {
  for (auto [p, q] : {std::pair<Index, Index>{1, 1}, {1, 2}, {2, 1}}) {
    const SignatureSpace sig(p, q);
    Rng rng(11 + static_cast<std::uint64_t>(p * 3 + q));
    for (int i = 0; i < 20; ++i) {
      const CMatrix f = complex_gaussian(p + q, p + q, rng);
      EXPECT_LE(operator_norm(pg_inverse(pg_transform(f, sig), sig) - f), 1e-10);
      const PgFormDefects d = pg_form_defects(f, sig);
      EXPECT_LE(d.forward, 1e-10);
      EXPECT_LE(d.inverse, 1e-10);
    }
  }
}

TEST(PgTransform, SingularBlock) {
  const SignatureSpace sig(1, 1);
  const DiscFunction f = [](Complex z) { return diag2(0.5, z); };
  EXPECT_NO_THROW(pg_transform(f, sig, 0.3));
  try {
    pg_transform(f, sig, 1e-14);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingularBlock);
  }
  try {
    verify_pg_kernel_identity(f, sig, 0.4, Complex(1e-14, 0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingularBlock);
  }
}

TEST(KernelIdentity, TrivialAndRandom) {
  const SignatureSpace s11(1, 1);
  const DiscFunction id = [](Complex) { return CMatrix(CMatrix::Identity(2, 2)); };
  EXPECT_LT(verify_pg_kernel_identity(id, s11, 0.2, Complex(0, 0.5)).max(), 1e-15);
  for (auto [p, q] : {std::pair<Index, Index>{1, 1}, {1, 2}, {2, 1}}) {
    const SignatureSpace sig(p, q);
    const DiscFunction f = random_j_contractive(sig, 40 + static_cast<std::uint64_t>(p + 2 * q));
    Rng rng(5);
    for (int i = 0; i < 10; ++i) {
      const Complex z = random_disc_point(rng, 0.95), w = random_disc_point(rng, 0.95);
      EXPECT_LE(verify_pg_kernel_identity(f, sig, z, w).max(), 1e-9);
    }
  }
}

TEST(JContractive, Examples) {
  const SignatureSpace sig(1, 1);
  Rng rng(2);
  const CMatrix v = pg_inverse(random_unitary(2, rng), sig);
  const JContractivity c = is_j_contractive([&](Complex) { return v; }, sig, {0.0, 0.5});
  EXPECT_TRUE(c.ok);
  EXPECT_LE(std::abs(c.violation), 1e-12);
  EXPECT_FALSE(is_j_contractive([](Complex) { return diag2(2.0, 1.0); }, sig, {0.0}).ok);
  const BlaschkePotapovProduct inner = random_inner(2, 3, 8);
  const DiscFunction f = pg_inverse(as_function(inner), sig);
  EXPECT_TRUE(is_j_contractive(f, sig, CircleGrid(32, 0.7, 0.01).points).ok);
}

TEST(JContractive, NegativeSquaresMatchUnderTransform) {
  const SignatureSpace sig(1, 1);
  const DiscFunction f = [](Complex z) { return diag2(1.0 / eval_blaschke(0.5, z), 2.0 / z); };
  const DiscFunction s = pg_transform(f, sig);
  for (std::size_t k : {4, 8, 16}) {
    const std::vector<Complex> pts = CircleGrid(k, 0.3, 0.2).points;
    EXPECT_EQ(negative_squares(j_kernel_sample(f, sig, pts), 1e-9).negative_eigenvalues, 1u);
    EXPECT_EQ(negative_squares(kernel_sample(s, pts), 1e-9).negative_eigenvalues, 1u);
  }
  EXPECT_FALSE(is_j_contractive(f, sig, {Complex(0.4, 0.1)}).ok);
  EXPECT_THROW(j_inner_approximate(f, sig, 4), Error);
}

TEST(SignatureFrame, Diagonalizes) {
  Rng rng(9);
  const CMatrix w0 = random_unitary(3, rng);
  CMatrix j0 = CMatrix::Identity(3, 3);
  j0(1, 1) = j0(2, 2) = -1.0;
  const CMatrix j = w0 * j0 * w0.adjoint();
  const SignatureFrame fr = signature_frame(j);
  EXPECT_EQ(fr.sig.p, 1);
  EXPECT_EQ(fr.sig.q, 2);
  EXPECT_LT((fr.w * fr.sig.j0 * fr.w.adjoint() - j).norm(), 1e-12);
  EXPECT_TRUE(is_unitary(fr.w, 1e-12).ok);
}

TEST(JInner, ConstantFixedPoint) {
  const SignatureSpace sig(1, 1);
  Rng rng(21);
  const CMatrix v = pg_inverse(random_unitary(2, rng), sig);
  const JInnerApproximant ap = j_inner_approximate([&](Complex) { return v; }, sig, 5);
  for (const Complex z : {Complex(0.0), Complex(0.3, 0.4), Complex(0.0, -0.9)}) {
    EXPECT_LT(operator_norm(ap.f_m(z) - v), 1e-9);
  }
}

TEST(JInner, DiagonalExample) {
  const SignatureSpace sig(1, 1);
  const DiscFunction f = [](Complex z) { return diag2(0.5 * z, 2.0 / z); };
  const CircleGrid rho(128, 0.7, 0.01);
  const CircleGrid circle(256, 1.0, 0.005);
  double prev = std::numeric_limits<double>::infinity();
  for (int m = 4; m <= 10; ++m) {
    const JInnerApproximant ap = j_inner_approximate(f, sig, m);
    EXPECT_EQ(ap.retries, 0);
    double defect = 0.0;
    std::size_t used = 0;
    for (const auto& z : circle.points) {
      const CMatrix b = ap.b_m(z);
      if (corner_condition(b, sig) > kBoundaryConditionGate) continue;
      ++used;
      defect = std::max(defect, j_unitarity_defect(pg_inverse(b, sig), sig));
    }
    EXPECT_GT(used, 200u);
    EXPECT_LE(defect, 1e-6);
    double err = 0.0;
    for (const auto& z : rho.points) err = std::max(err, operator_norm(ap.f_m(z) - f(z)));
    EXPECT_LT(err, prev) << "m = " << m;
    prev = err;
  }
}

TEST(JInner, CornerDegenerateAfterRetries) {
  const SignatureSpace sig(1, 1);
  CMatrix swap = CMatrix::Zero(2, 2);
  swap(0, 1) = swap(1, 0) = 1.0;
  try {
    j_inner_from_sigma(MatrixPolynomial({swap}), sig, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CornerDegenerate);
  }
}

TEST(KreinLanger, IdentityBReducesToDilation) {
  const MatrixPolynomial l({CMatrix::Constant(1, 1, 0.2), CMatrix::Constant(1, 1, 0.5)});
  const KreinLangerPair pair{{CMatrix::Identity(1, 1), {}}, l};
  const KreinLangerApproximant ap = krein_langer_approximate(pair, 6);
  const DiscFunction direct = inner_approximant_disc(contractive_realization(l), 6);
  for (const auto& z : CircleGrid(16, 0.6).points) EXPECT_LT(operator_norm(ap.f_m(z) - direct(z)), 1e-13);
}

TEST(KreinLanger, CompactRegionBound) {
  const BlaschkePotapovProduct b{CMatrix::Identity(1, 1), {{0.5, CMatrix::Identity(1, 1)}}};
  const MatrixPolynomial l({CMatrix::Zero(1, 1), CMatrix::Constant(1, 1, 0.5)});
  const KreinLangerPair pair{b, l};
  const std::vector<Complex> pts = region_points();
  double binv = 0.0;
  for (const auto& z : pts) binv = std::max(binv, operator_norm(bp_inverse(b, z)));
  double prev = std::numeric_limits<double>::infinity();
  for (int m = 4; m <= 10; ++m) {
    const KreinLangerApproximant ap = krein_langer_approximate(pair, m);
    double err = 0.0;
    for (const auto& z : pts) {
      const CMatrix f = bp_inverse(b, z) * eval_polynomial(l, z);
      err = std::max(err, operator_norm(ap.f_m(z) - f));
    }
    EXPECT_LE(err, binv * tail_bound(0.9, m).bound);
    EXPECT_LT(err, prev);
    prev = err;
    for (const auto& z : CircleGrid(64, 1.0, 0.01).points) {
      EXPECT_TRUE(is_unitary(ap.f_m(z), 1e-8).ok);
    }
  }
  try {
    krein_langer_approximate(pair, 4).f_m(0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PoleHit);
  }
}

TEST(KreinLanger, CircleMode) {
  const BlaschkePotapovProduct b{CMatrix::Identity(1, 1), {{0.5, CMatrix::Identity(1, 1)}}};
  const MatrixPolynomial l({CMatrix::Zero(1, 1), CMatrix::Constant(1, 1, 0.5)});
  const KreinLangerApproximant ap = krein_langer_approximate({b, l}, 0, KreinLangerMode::Circle, 0.1);
  EXPECT_LE(ap.hull_residual, 0.1);
  double err = 0.0, binv = 0.0;
  for (const auto& z : CircleGrid(512).points) {
    const CMatrix bi = bp_inverse(b, z);
    binv = std::max(binv, operator_norm(bi));
    err = std::max(err, operator_norm(ap.f_m(z) - bi * eval_polynomial(l, z)));
  }
  EXPECT_LE(err, binv * ap.hull_residual + 1e-12);
}

TEST(KreinLanger, RightMirror) {
  const BlaschkePotapovProduct b{CMatrix::Identity(1, 1), {{Complex(0.3, 0.2), CMatrix::Identity(1, 1)}}};
  const MatrixPolynomial l({CMatrix::Constant(1, 1, 0.1), CMatrix::Constant(1, 1, 0.6)});
  const KreinLangerApproximant left = krein_langer_approximate({b, l}, 6);
  const KreinLangerApproximant right = right_krein_langer_approximate({b, l}, 6);
  for (const auto& z : CircleGrid(32, 0.8, 0.1).points) EXPECT_LT(operator_norm(left.f_m(z) - right.f_m(z)), 1e-12);

  const BlaschkePotapovProduct b2 = random_inner(2, 1, 77);
  Rng rng(4);
  const MatrixPolynomial l2({random_contraction(2, 2, rng, 0.4), random_contraction(2, 2, rng, 0.4)});
  const std::vector<Complex> pts = CircleGrid(64, 0.6, 0.02).points;
  double diff = 0.0, prev_l = 1e9, prev_r = 1e9;
  for (int m : {4, 8, 12}) {
    const KreinLangerApproximant lf = krein_langer_approximate({b2, l2}, m);
    const KreinLangerApproximant rf = right_krein_langer_approximate({b2, l2}, m);
    double el = 0.0, er = 0.0;
    for (const auto& z : pts) {
      const CMatrix bi = bp_inverse(b2, z), lz = eval_polynomial(l2, z);
      el = std::max(el, operator_norm(lf.f_m(z) - bi * lz));
      er = std::max(er, operator_norm(rf.f_m(z) - lz * bi));
      diff = std::max(diff, operator_norm(lf.f_m(z) - rf.f_m(z)));
    }
    EXPECT_LT(el, prev_l);
    EXPECT_LT(er, prev_r);
    prev_l = el;
    prev_r = er;
  }
  EXPECT_GT(diff, 1e-3);
}

TEST(KreinLanger, FromPoles) {
  const DiscFunction s = [](Complex z) { return diag2(1.0 / eval_blaschke(0.5, z), 0.5 * z); };
  const KreinLangerFit fit = krein_langer_from_poles(s, {0.5}, 8);
  EXPECT_EQ(degree(fit.pair.b), 1);
  EXPECT_LE(fit.defect, 1e-10);
  EXPECT_NO_THROW(fit.pair.validate());
  EXPECT_THROW(krein_langer_from_poles(s, {Complex(-0.4, 0.0)}, 8), Error);
}

TEST(KreinLanger, MeromorphicJPipeline) {
  const SignatureSpace sig(1, 1);
  const DiscFunction f = [](Complex z) { return diag2(1.0 / eval_blaschke(0.5, z), 2.0 / z); };
  const std::vector<Complex> pts = CircleGrid(64, 0.8, 0.02).points;
  double prev = 1e9;
  for (int m : {4, 8, 12}) {
    const DiscFunction fm = j_meromorphic_approximate(f, sig, {0.5}, m);
    double err = 0.0;
    for (const auto& z : pts) err = std::max(err, operator_norm(fm(z) - f(z)));
    EXPECT_LT(err, prev);
    prev = err;
  }
  EXPECT_LT(prev, 0.2);
}

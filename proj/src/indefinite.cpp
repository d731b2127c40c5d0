#include "innerapprox/indefinite.hpp"

#include "innerapprox/realization.hpp"

#include <cmath>
#include <numbers>

namespace innerapprox {

namespace {

double condition(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return 1.0;
  const double lo = s(s.size() - 1);
  return lo > 0.0 ? s(0) / lo : std::numeric_limits<double>::infinity();
}

// M^{-1} X with the block condition gate
CMatrix left_solve(const CMatrix& m, const CMatrix& x, const char* what) {
  if (condition(m) > kBlockConditionLimit) throw Error(ErrorKind::SingularBlock, what);
  return m.fullPivLu().solve(x);
}

// X M^{-1}
CMatrix right_solve(const CMatrix& x, const CMatrix& m, const char* what) {
  return left_solve(m.adjoint(), x.adjoint(), what).adjoint();
}

void check_size(const CMatrix& f, const SignatureSpace& sig) {
  if (f.rows() != sig.size() || f.cols() != sig.size()) {
    throw Error(ErrorKind::DimensionMismatch, "value size differs from p + q");
  }
}

// Fourier coefficients 0..degree of f on the unit circle, offset half a step from 1.
MatrixPolynomial circle_taylor(const DiscFunction& f, std::size_t degree) {
  std::size_t k = 64;
  while (k < 4 * (degree + 1)) k *= 2;
  const CircleGrid grid(k, 1.0, std::numbers::pi / static_cast<double>(k));
  std::vector<CMatrix> values(k);
  parallel_for(k, [&](std::size_t j) { values[j] = f(grid.points[j]); });
  const Index n = values.front().rows();
  std::vector<CMatrix> c(degree + 1, CMatrix::Zero(n, n));
  for (std::size_t j = 0; j < k; ++j) {
    const Complex wbar = std::conj(grid.points[j]);
    Complex pw = 1.0;
    for (std::size_t i = 0; i <= degree; ++i) {
      c[i] += pw * values[j];
      pw *= wbar;
    }
  }
  double top = 0.0;
  for (auto& ci : c) {
    ci /= static_cast<double>(k);
    top = std::max(top, ci.norm());
  }
  while (c.size() > 1 && c.back().norm() <= 1e-14 * std::max(top, 1.0)) c.pop_back();
  return MatrixPolynomial(std::move(c));
}

}  // namespace

CMatrix pg_transform(const CMatrix& f, const SignatureSpace& sig) {
  check_size(f, sig);
  const CMatrix& p = sig.proj_p;
  const CMatrix& q = sig.proj_q;
  return right_solve(p * f + q, p + q * f, "P + QF is singular");
}

CMatrix pg_transform(const DiscFunction& f, const SignatureSpace& sig, Complex z) { return pg_transform(f(z), sig); }

DiscFunction pg_transform(DiscFunction f, const SignatureSpace& sig) {
  return [f = std::move(f), sig](Complex z) { return pg_transform(f(z), sig); };
}

CMatrix pg_inverse(const CMatrix& sigma, const SignatureSpace& sig) {
  check_size(sigma, sig);
  const CMatrix& p = sig.proj_p;
  const CMatrix& q = sig.proj_q;
  return left_solve(p - sigma * q, sigma * p - q, "P - SQ is singular");
}

CMatrix pg_inverse(const DiscFunction& sigma, const SignatureSpace& sig, Complex z) {
  return pg_inverse(sigma(z), sig);
}

DiscFunction pg_inverse(DiscFunction sigma, const SignatureSpace& sig) {
  return [s = std::move(sigma), sig](Complex z) { return pg_inverse(s(z), sig); };
}

PgFormDefects pg_form_defects(const CMatrix& f, const SignatureSpace& sig) {
  const CMatrix& p = sig.proj_p;
  const CMatrix& q = sig.proj_q;
  const CMatrix s = pg_transform(f, sig);
  const CMatrix s_alt = left_solve(p - f * q, f * p - q, "P - FQ is singular");
  const CMatrix f_back = pg_inverse(s, sig);
  const CMatrix f_alt = right_solve(q + p * s, p + q * s, "P + QS is singular");
  return {operator_norm(s - s_alt), operator_norm(f_back - f_alt)};
}

KernelIdentityDefect verify_pg_kernel_identity(const DiscFunction& f, const SignatureSpace& sig, Complex z,
                                               Complex w) {
  const CMatrix fz = f(z), fw = f(w);
  check_size(fz, sig);
  const Index n = sig.size();
  const CMatrix& p = sig.proj_p;
  const CMatrix& q = sig.proj_q;
  const CMatrix& j = sig.j0;
  const CMatrix id = CMatrix::Identity(n, n);
  const CMatrix sz = pg_transform(fz, sig), sw = pg_transform(fw, sig);

  KernelIdentityDefect out;
  {
    const CMatrix mid = left_solve(p - fz * q, j - fz * j * fw.adjoint(), "P - F(z)Q is singular");
    const CMatrix rhs = right_solve(mid, (p - fw * q).adjoint(), "P - F(w)Q is singular");
    out.left = operator_norm((id - sz * sw.adjoint()) - rhs);
  }
  {
    const CMatrix mid = left_solve((p + q * fw).adjoint(), j - fw.adjoint() * j * fz, "P + QF(w) is singular");
    const CMatrix rhs = right_solve(mid, p + q * fz, "P + QF(z) is singular");
    out.right = operator_norm((id - sw.adjoint() * sz) - rhs);
  }
  return out;
}

double j_unitarity_defect(const CMatrix& f, const SignatureSpace& sig) {
  check_size(f, sig);
  return operator_norm(f * sig.j0 * f.adjoint() - sig.j0);
}

JContractivity is_j_contractive(const DiscFunction& f, const SignatureSpace& sig, const std::vector<Complex>& points,
                                double tol) {
  std::vector<double> worst(points.size(), -std::numeric_limits<double>::infinity());
  parallel_for(points.size(), [&](std::size_t i) {
    const CMatrix v = f(points[i]);
    check_size(v, sig);
    const CMatrix h = v * sig.j0 * v.adjoint() - sig.j0;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
    worst[i] = es.eigenvalues().maxCoeff();
  });
  double v = -std::numeric_limits<double>::infinity();
  for (double x : worst) v = std::max(v, x);
  return {v <= tol, v};
}

SignatureFrame signature_frame(const CMatrix& j, double tol) {
  if (j.rows() != j.cols()) throw Error(ErrorKind::NotSquare, "signature must be square");
  const Index n = j.rows();
  if ((j - j.adjoint()).norm() > tol || (j * j - CMatrix::Identity(n, n)).norm() > tol) {
    throw Error(ErrorKind::InvalidArgument, "J must satisfy J = J* = J^{-1}");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (j + j.adjoint()));
  Index p = 0;
  for (Index i = 0; i < n; ++i)
    if (es.eigenvalues()(i) > 0.0) ++p;
  // eigenvalues ascend, so the +1 block sits on the right
  CMatrix w(n, n);
  w << es.eigenvectors().rightCols(p), es.eigenvectors().leftCols(n - p);
  return {SignatureSpace(p, n - p), w};
}

double corner_condition(const CMatrix& sigma, const SignatureSpace& sig) {
  return condition(sig.proj_p - sigma * sig.proj_q);
}

double corner_determinant(const DiscFunction& b, const SignatureSpace& sig, const std::vector<Complex>& points) {
  std::vector<double> dets(points.size(), 0.0);
  parallel_for(points.size(), [&](std::size_t i) {
    const CMatrix v = b(points[i]);
    dets[i] = std::abs(v.bottomRightCorner(sig.q, sig.q).determinant());
  });
  double best = 0.0;
  for (double d : dets) best = std::max(best, d);
  return best;
}

MatrixPolynomial pg_taylor(const DiscFunction& f, const SignatureSpace& sig, std::size_t degree) {
  return circle_taylor(pg_transform(f, sig), degree);
}

JInnerApproximant j_inner_from_sigma(const MatrixPolynomial& sigma, const SignatureSpace& sig, int m) {
  if (sigma.size() != sig.size()) throw Error(ErrorKind::DimensionMismatch, "polynomial size differs from p + q");
  const Colligation col = contractive_realization(sigma);
  const std::vector<Complex> grid = CircleGrid(256, 1.0, std::numbers::pi / 256.0).points;

  JInnerApproximant out;
  out.sigma = sigma;
  for (int attempt = 0; attempt <= 4; ++attempt) {
    const DiscFunction b = inner_approximant_disc(unitary_dilation(col, m));
    const double corner = corner_determinant(b, sig, grid);
    if (corner >= 1e-10) {
      out.b_m = b;
      out.f_m = pg_inverse(b, sig);
      out.m = m;
      out.retries = attempt;
      out.corner = corner;
      return out;
    }
    m *= 2;
  }
  throw Error(ErrorKind::CornerDegenerate, "corner determinant vanishes on the grid after 4 retries");
}

JInnerApproximant j_inner_approximate(const DiscFunction& f, const SignatureSpace& sig, int m, std::size_t degree) {
  std::vector<Complex> probe;
  for (double r : {0.3, 0.6, 0.9}) {
    const CircleGrid ring(64, r, std::numbers::pi / 64.0);
    probe.insert(probe.end(), ring.points.begin(), ring.points.end());
  }
  const JContractivity jc = is_j_contractive(f, sig, probe);
  if (!jc.ok) {
    throw Error(ErrorKind::NotContractiveInput,
                "F J0 F* - J0 has eigenvalue " + std::to_string(jc.violation) + "; use the Krein-Langer route");
  }
  MatrixPolynomial sigma = pg_taylor(f, sig, degree);
  const double sup = sup_norm_estimate(as_function(sigma), CircleGrid(1024)).value;
  // truncation can push the polynomial slightly outside the ball
  if (sup > 1.0) sigma = strictify(sigma, 1.0 - 1.0 / sup, 1.0);
  return j_inner_from_sigma(sigma, sig, m);
}

void KreinLangerPair::validate(double tol) const {
  b.validate();
  if (l.size() != b.size()) throw Error(ErrorKind::DimensionMismatch, "B and L sizes differ");
  const double sup = sup_norm_estimate(as_function(l), CircleGrid(512)).value;
  if (sup > 1.0 + tol) throw Error(ErrorKind::NotContractive, "L has sampled sup " + std::to_string(sup));
}

CMatrix bp_inverse(const BlaschkePotapovProduct& b, Complex z) {
  const Index n = b.size();
  const CMatrix id = CMatrix::Identity(n, n);
  CMatrix acc = b.unitary.adjoint();
  for (const auto& f : b.factors) {
    const Complex v = eval_blaschke(f.alpha, z);
    if (std::abs(v) < 1e-13) throw Error(ErrorKind::PoleHit, "evaluation at a zero of det B");
    acc = ((1.0 / v) * f.proj + (id - f.proj)) * acc;
  }
  return acc;
}

namespace {

struct LApprox {
  DiscFunction lm;
  double residual = 0.0;
  std::size_t atoms = 0;
};

LApprox approximate_l(const KreinLangerPair& pair, int m, KreinLangerMode mode, double eps) {
  pair.validate();
  if (mode == KreinLangerMode::Compact) {
    return {inner_approximant_disc(contractive_realization(pair.l), m), 0.0, 0};
  }
  const FisherReport rep = fisher_pipeline(pair.l, eps);
  const ConvexCombination comb = rep.combination;
  return {[comb](Complex z) { return comb(z); }, comb.residual, comb.size()};
}

}  // namespace

KreinLangerApproximant krein_langer_approximate(const KreinLangerPair& pair, int m, KreinLangerMode mode,
                                                double eps) {
  const LApprox la = approximate_l(pair, m, mode, eps);
  KreinLangerApproximant out;
  out.f_m = [b = pair.b, lm = la.lm](Complex z) { return CMatrix(bp_inverse(b, z) * lm(z)); };
  out.m = m;
  out.hull_residual = la.residual;
  out.atoms = la.atoms;
  return out;
}

KreinLangerApproximant right_krein_langer_approximate(const KreinLangerPair& pair, int m, KreinLangerMode mode,
                                                      double eps) {
  const LApprox la = approximate_l(pair, m, mode, eps);
  KreinLangerApproximant out;
  out.f_m = [b = pair.b, lm = la.lm](Complex z) { return CMatrix(lm(z) * bp_inverse(b, z)); };
  out.m = m;
  out.hull_residual = la.residual;
  out.atoms = la.atoms;
  return out;
}

KreinLangerFit krein_langer_from_poles(const DiscFunction& f, const std::vector<Complex>& poles, std::size_t degree) {
  const Index n = f(0.5 * std::polar(1.0, 0.1)).rows();
  BlaschkePotapovProduct b{CMatrix::Identity(n, n), {}};
  for (std::size_t i = 0; i < poles.size(); ++i) {
    const Complex a = poles[i];
    if (!(std::abs(a) < 1.0)) throw Error(ErrorKind::InvalidArgument, "poles must lie in the open disc");
    double delta = std::min(0.1, 0.5 * (1.0 - std::abs(a)));
    for (std::size_t j = 0; j < poles.size(); ++j)
      if (j != i) delta = std::min(delta, 0.5 * std::abs(poles[j] - a));
    // residue of B F at a by the trapezoid rule on a small circle
    const std::size_t k = 64;
    CMatrix res = CMatrix::Zero(n, n);
    for (std::size_t j = 0; j < k; ++j) {
      const Complex e = std::polar(delta, 2.0 * std::numbers::pi * static_cast<double>(j) / k);
      res += eval_bp_product(b, a + e) * f(a + e) * e;
    }
    res /= static_cast<double>(k);
    Eigen::JacobiSVD<CMatrix> svd(res, Eigen::ComputeFullU);
    if (svd.singularValues()(0) < 1e-8) throw Error(ErrorKind::InvalidArgument, "no pole found at a listed point");
    const CMatrix u = svd.matrixU().col(0);
    b.factors.insert(b.factors.begin(), BPFactor{a, u * u.adjoint()});
  }
  KreinLangerFit fit;
  fit.pair.b = b;
  fit.pair.l = circle_taylor([&](Complex z) { return CMatrix(eval_bp_product(b, z) * f(z)); }, degree);

  double worst = 0.0;
  for (double r : {0.3, 0.8}) {
    for (const Complex& z : CircleGrid(64, r, 0.05).points) {
      bool near = false;
      for (const Complex& a : poles) near = near || std::abs(z - a) < 0.05;
      if (near) continue;
      worst = std::max(worst, operator_norm(f(z) - bp_inverse(b, z) * eval_polynomial(fit.pair.l, z)));
    }
  }
  fit.defect = worst;
  return fit;
}

DiscFunction j_meromorphic_approximate(const DiscFunction& f, const SignatureSpace& sig,
                                       const std::vector<Complex>& poles, int m, std::size_t degree) {
  KreinLangerFit fit = krein_langer_from_poles(pg_transform(f, sig), poles, degree);
  const double sup = sup_norm_estimate(as_function(fit.pair.l), CircleGrid(1024)).value;
  if (sup > 1.0) fit.pair.l = strictify(fit.pair.l, 1.0 - 1.0 / sup, 1.0);
  return pg_inverse(krein_langer_approximate(fit.pair, m).f_m, sig);
}

}  // namespace innerapprox

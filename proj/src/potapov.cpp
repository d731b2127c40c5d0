#include "innerapprox/potapov.hpp"

#include <cmath>

namespace innerapprox {

namespace {

constexpr double kPoleFloor = 1e-13;

CMatrix orthonormal_columns(const CMatrix& p) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (p + p.adjoint()));
  Index count = 0;
  for (Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) > 0.5) ++count;
  return es.eigenvectors().rightCols(count);
}

}  // namespace

void BlaschkePotapovProduct::validate(double tol) const {
  if (unitary.rows() != unitary.cols()) throw Error(ErrorKind::NotSquare, "product unitary must be square");
  if (!is_unitary(unitary, tol).ok) throw Error(ErrorKind::NotUnitary, "product constant is not unitary");
  for (const auto& f : factors) {
    if (f.proj.rows() != size() || f.proj.cols() != size()) {
      throw Error(ErrorKind::DimensionMismatch, "projection size differs from N");
    }
    if (!(std::abs(f.alpha) < 1.0)) throw Error(ErrorKind::InvalidArgument, "factor needs |alpha| < 1");
    if ((f.proj * f.proj - f.proj).norm() > tol || (f.proj - f.proj.adjoint()).norm() > tol) {
      throw Error(ErrorKind::InvalidArgument, "factor matrix is not an orthogonal projection");
    }
  }
}

Complex eval_blaschke(Complex alpha, Complex z) {
  const Complex den = 1.0 - std::conj(alpha) * z;
  if (std::abs(den) < kPoleFloor) throw Error(ErrorKind::PoleHit, "evaluation at 1/conj(alpha)");
  return (z - alpha) / den;
}

CMatrix eval_bp_factor(const BPFactor& f, Complex z) {
  const Index n = f.proj.rows();
  return eval_blaschke(f.alpha, z) * f.proj + (CMatrix::Identity(n, n) - f.proj);
}

CMatrix eval_bp_product(const BlaschkePotapovProduct& prod, Complex z) {
  CMatrix acc = prod.unitary;
  for (const auto& f : prod.factors) acc = (acc * eval_bp_factor(f, z)).eval();
  return acc;
}

DiscFunction as_function(const BlaschkePotapovProduct& prod) {
  return [prod](Complex z) { return eval_bp_product(prod, z); };
}

Index degree(const BlaschkePotapovProduct& prod) {
  Index total = 0;
  for (const auto& f : prod.factors) total += static_cast<Index>(std::lround(f.proj.trace().real()));
  return total;
}

Colligation cascade(const Colligation& first, const Colligation& second) {
  const Index n = first.n_out();
  if (second.n_out() != n) throw Error(ErrorKind::DimensionMismatch, "cascade needs equal sizes");
  const Index d1 = first.n_state(), d2 = second.n_state();
  CMatrix b(n, d1 + d2), c(d1 + d2, n), d = CMatrix::Zero(d1 + d2, d1 + d2);
  b << first.b, first.a * second.b;
  c << first.c * second.a, second.c;
  d.topLeftCorner(d1, d1) = first.d;
  d.topRightCorner(d1, d2) = first.c * second.b;
  d.bottomRightCorner(d2, d2) = second.d;
  return Colligation(first.a * second.a, b, c, d);
}

Colligation product_colligation(const BlaschkePotapovProduct& prod) {
  const Index n = prod.size();
  Colligation acc(CMatrix::Identity(n, n), CMatrix::Zero(n, 0), CMatrix::Zero(0, n), CMatrix::Zero(0, 0));
  for (const auto& f : prod.factors) {
    const CMatrix v = orthonormal_columns(f.proj);
    const Index k = v.cols();
    const double s = std::sqrt(1.0 - std::norm(f.alpha));
    const Colligation fc(CMatrix::Identity(n, n) - (1.0 + f.alpha) * f.proj, s * v, s * v.adjoint(),
                         std::conj(f.alpha) * CMatrix::Identity(k, k));
    acc = cascade(acc, fc);
  }
  return Colligation(prod.unitary * acc.a, prod.unitary * acc.b, acc.c, acc.d);
}

RadialScaled radial_scale(DiscFunction f, double r) {
  if (!(r >= 0.0 && r <= 1.0)) throw Error(ErrorKind::InvalidRadius, "r must lie in [0, 1]");
  return RadialScaled{std::move(f), r};
}

InnerCheck is_inner_on_circle(const DiscFunction& f, const CircleGrid& grid, double tol) {
  std::vector<double> defects(grid.size(), 0.0);
  parallel_for(grid.size(), [&](std::size_t i) {
    Complex z = grid.points[i];
    for (int attempt = 0;; ++attempt) {
      try {
        const CMatrix v = f(z);
        defects[i] = operator_norm(v.adjoint() * v - CMatrix::Identity(v.cols(), v.cols()));
        return;
      } catch (const Error& e) {
        const bool pole = e.kind() == ErrorKind::PoleHit || e.kind() == ErrorKind::SingularResolvent;
        if (!pole || attempt >= 3) throw;
        z *= std::polar(1.0, 1e-9);
      }
    }
  });
  double worst = 0.0;
  for (double d : defects) worst = std::max(worst, d);
  return {worst <= tol, worst};
}

CMatrix projection_onto(const CMatrix& v) {
  Eigen::HouseholderQR<CMatrix> qr(v);
  const CMatrix q = qr.householderQ() * CMatrix::Identity(v.rows(), v.cols());
  return q * q.adjoint();
}

BlaschkePotapovProduct random_inner(Index n, std::size_t m_factors, std::uint64_t seed) {
  Rng rng(seed);
  BlaschkePotapovProduct prod;
  prod.unitary = random_unitary(n, rng);
  std::uniform_int_distribution<Index> rank_dist(1, n);
  for (std::size_t k = 0; k < m_factors; ++k) {
    const Complex alpha = random_disc_point(rng, 0.8);
    const Index rank = rank_dist(rng);
    prod.factors.push_back({alpha, projection_onto(complex_gaussian(n, rank, rng))});
  }
  return prod;
}

}  // namespace innerapprox

#ifndef INNERAPPROX_CORE_HPP
#define INNERAPPROX_CORE_HPP

#include "innerapprox/types.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <random>

namespace innerapprox {

/// Resolvent solves fail when the reciprocal condition estimate drops below this.
inline constexpr double kResolventConditionLimit = 1e13;
/// Eigenvalues below this are clipped to zero in PSD square roots.
inline constexpr double kPsdClip = 1e-12;

// ---------------------------------------------------------------------------
// Norms and square roots (header templates so they accept any dense expression)

/// Largest singular value.
template <typename Derived>
double operator_norm(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>> svd(m.eval());
  return static_cast<double>(svd.singularValues()(0));
}

/// Hermitian PSD square root via eigendecomposition; eigenvalues below `clip`
/// are set to zero before taking roots.
template <typename Derived>
CMatrix psd_sqrt(const Eigen::MatrixBase<Derived>& h, double clip = kPsdClip) {
  const CMatrix herm = (0.5 * (h + h.adjoint())).eval();
  if (herm.rows() == 0) return herm;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(herm);
  Eigen::VectorXd ev = es.eigenvalues();
  for (Index i = 0; i < ev.size(); ++i) ev(i) = ev(i) < clip ? 0.0 : std::sqrt(ev(i));
  return es.eigenvectors() * ev.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

/// Moore-Penrose pseudo-inverse with relative singular-value cutoff.
CMatrix pseudo_inverse(const CMatrix& m, double rel_tol = 1e-13);

// ---------------------------------------------------------------------------
// Transfer functions

CMatrix eval_transfer_disc(const Colligation& col, Complex z);
CMatrix eval_transfer_bidisc(const Colligation& col, const BidiscSplit& split, Complex z1, Complex z2);
CMatrix eval_polynomial(const MatrixPolynomial& p, Complex z);

/// Solves (I - M) X = R, raising SingularResolvent past the condition limit.
CMatrix solve_resolvent(const CMatrix& m, const CMatrix& rhs);

DiscFunction as_function(const Colligation& col);
DiscFunction as_function(const MatrixPolynomial& p);

// ---------------------------------------------------------------------------
// Contractions and defects

struct Defects {
  CMatrix d_t;      // (I - T*T)^{1/2}
  CMatrix d_tstar;  // (I - TT*)^{1/2}
};

Defects defect_operators(const CMatrix& t);

struct MatrixCheck {
  bool ok = false;
  double defect = 0.0;
};

/// ok iff sigma_max <= 1 + tol; defect = sigma_max - 1.
MatrixCheck is_contraction(const CMatrix& m, double tol);
/// ok iff both ||M*M - I|| and ||MM* - I|| are within tol; defect is the larger.
MatrixCheck is_unitary(const CMatrix& m, double tol);

// ---------------------------------------------------------------------------
// Sampled sup norms

struct SupNorm {
  double value = 0.0;
  std::size_t grid_size = 0;
};

/// Sampled maximum of the operator norm; a lower estimate of the true sup.
SupNorm sup_norm_estimate(const DiscFunction& f, const CircleGrid& grid);
SupNorm sup_norm_estimate(const BidiscFunction& f, const TorusGrid& grid);
/// Sampled over arbitrary points.
SupNorm sup_norm_estimate(const DiscFunction& f, const std::vector<Complex>& points);

// ---------------------------------------------------------------------------
// Seeded generators. All randomness flows through std::mt19937_64.

using Rng = std::mt19937_64;

CMatrix complex_gaussian(Index rows, Index cols, Rng& rng);
/// Haar-distributed unitary from the QR factorization of a Gaussian matrix.
CMatrix random_unitary(Index n, Rng& rng);
/// Gaussian matrix rescaled to the given operator norm.
CMatrix random_contraction(Index rows, Index cols, Rng& rng, double norm = 1.0);
/// Colligation whose system matrix has operator norm `norm`.
Colligation random_colligation(Index n_out, Index n_state, std::uint64_t seed, double norm = 1.0);
/// Uniform point in the disc of the given radius.
Complex random_disc_point(Rng& rng, double radius);

// ---------------------------------------------------------------------------
// Threading: INNERAPPROX_THREADS caps worker count; results are written by
// index so reductions stay in a fixed order.

unsigned thread_count();
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace innerapprox

#endif  // INNERAPPROX_CORE_HPP

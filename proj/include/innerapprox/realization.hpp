#ifndef INNERAPPROX_REALIZATION_HPP
#define INNERAPPROX_REALIZATION_HPP

#include "innerapprox/core.hpp"

namespace innerapprox {

/// Sampled kernel: block (i, j) is K(w_i, w_j).
struct KernelSample {
  std::vector<Complex> points;
  CMatrix blocks;
  Index n = 0;  // block size
};

struct NegativeSquaresReport {
  std::size_t sample_count = 0;
  std::size_t negative_eigenvalues = 0;
  double eigenvalue_floor = 0.0;
  double tolerance = 0.0;
};

/// (I - F(z)F(w)*) / (1 - z conj(w)).
CMatrix schur_kernel(const DiscFunction& f, Complex z, Complex w);
/// (J0 - F(z) J0 F(w)*) / (1 - z conj(w)).
CMatrix j_schur_kernel(const DiscFunction& f, const SignatureSpace& sig, Complex z, Complex w);

KernelSample kernel_sample(const DiscFunction& f, const std::vector<Complex>& points);
KernelSample j_kernel_sample(const DiscFunction& f, const SignatureSpace& sig, const std::vector<Complex>& points);

NegativeSquaresReport negative_squares(const KernelSample& sample, double tol);

/// (1 - delta) p(r z): coefficient k scaled by (1 - delta) r^k.
MatrixPolynomial strictify(const MatrixPolynomial& p, double delta, double r);

/// Companion-style realization with d = degree * N; exact but not contractive in general.
Colligation shift_realization(const MatrixPolynomial& p);

/// Polynomial R of the same degree with R R* = I - p p* on the circle (outer
/// factor by banded block Cholesky of the Toeplitz matrix). Requires sup |p| <= 1.
MatrixPolynomial spectral_cofactor(const MatrixPolynomial& p, double tol = 1e-14, int max_rows = 20000);

struct RealizationReport {
  Colligation col;
  Index numerical_rank = 0;
  double validation_residual = 0.0;
  double isometry_defect = 0.0;
  bool rank_warning = false;  // d > degree * N
};

/// Contractive colligation whose transfer function is p. sample_count = 0 picks 2(degree+1).
RealizationReport contractive_realization_report(const MatrixPolynomial& p, std::size_t sample_count = 0,
                                                 double rank_tol = 1e-10);
Colligation contractive_realization(const MatrixPolynomial& p, std::size_t sample_count = 0,
                                    double rank_tol = 1e-10);

/// Unitary colligation (2N outputs) of an inner Psi with top-left N x N block p.
/// Needs sup |p| < 1 on the circle for the companion block to stay strict.
Colligation darlington_completion(const MatrixPolynomial& p);

}  // namespace innerapprox

#endif  // INNERAPPROX_REALIZATION_HPP

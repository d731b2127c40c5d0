#ifndef INNERAPPROX_INDEFINITE_HPP
#define INNERAPPROX_INDEFINITE_HPP

#include "innerapprox/dilation.hpp"
#include "innerapprox/hull.hpp"
#include "innerapprox/potapov.hpp"

namespace innerapprox {

/// Condition number of P + QF (or P - SQ) past which the transform is undefined.
inline constexpr double kBlockConditionLimit = 1e12;
/// Circle points whose corner block is worse conditioned than this are skipped in J0 checks.
inline constexpr double kBoundaryConditionGate = 1e8;

// ---------------------------------------------------------------------------
// Potapov-Ginzburg transform

/// Sigma = (PF + Q)(P + QF)^{-1}.
CMatrix pg_transform(const CMatrix& f, const SignatureSpace& sig);
CMatrix pg_transform(const DiscFunction& f, const SignatureSpace& sig, Complex z);
DiscFunction pg_transform(DiscFunction f, const SignatureSpace& sig);

/// F = (P - Sigma Q)^{-1}(Sigma P - Q).
CMatrix pg_inverse(const CMatrix& sigma, const SignatureSpace& sig);
CMatrix pg_inverse(const DiscFunction& sigma, const SignatureSpace& sig, Complex z);
DiscFunction pg_inverse(DiscFunction sigma, const SignatureSpace& sig);

struct PgFormDefects {
  double forward = 0.0;  // against (P - FQ)^{-1}(FP - Q)
  double inverse = 0.0;  // against (Q + P Sigma)(P + Q Sigma)^{-1}
};
/// Agreement of the two algebraic forms of the transform and of its inverse at F.
PgFormDefects pg_form_defects(const CMatrix& f, const SignatureSpace& sig);

struct KernelIdentityDefect {
  double left = 0.0;   // I - S(z)S(w)* against the (P - FQ)^{-1} form
  double right = 0.0;  // I - S(w)*S(z) against the (P + QF)^{-1} form
  double max() const { return std::max(left, right); }
};
KernelIdentityDefect verify_pg_kernel_identity(const DiscFunction& f, const SignatureSpace& sig, Complex z,
                                               Complex w);

struct JContractivity {
  bool ok = false;
  double violation = 0.0;  // max eigenvalue of F J0 F* - J0
};
JContractivity is_j_contractive(const DiscFunction& f, const SignatureSpace& sig, const std::vector<Complex>& points,
                                double tol = 1e-9);

/// || F J0 F* - J0 || at one point.
double j_unitarity_defect(const CMatrix& f, const SignatureSpace& sig);

/// Arbitrary signature J = W J0 W* with W unitary.
struct SignatureFrame {
  SignatureSpace sig;
  CMatrix w;
};
SignatureFrame signature_frame(const CMatrix& j, double tol = 1e-10);

// ---------------------------------------------------------------------------
// J0-inner approximation

/// Largest |det| of the trailing q x q block over the points.
double corner_determinant(const DiscFunction& b, const SignatureSpace& sig, const std::vector<Complex>& points);

/// Condition number of P - S(z)Q; used to gate boundary points.
double corner_condition(const CMatrix& sigma, const SignatureSpace& sig);

struct JInnerApproximant {
  DiscFunction f_m;        // pg_inverse of b_m
  DiscFunction b_m;        // inner approximant of the transformed function
  MatrixPolynomial sigma;  // truncated Taylor polynomial of the transform
  int m = 0;               // depth actually used after retries
  int retries = 0;
  double corner = 0.0;     // max |det| of the corner block on the circle grid
};

/// Inner approximation of a contractive polynomial followed by the inverse transform.
/// Doubles m up to four times while the corner determinant vanishes on the grid.
JInnerApproximant j_inner_from_sigma(const MatrixPolynomial& sigma, const SignatureSpace& sig, int m);

/// Taylor polynomial of Sigma = pg_transform(f) from samples on the unit circle.
MatrixPolynomial pg_taylor(const DiscFunction& f, const SignatureSpace& sig, std::size_t degree);

/// Full pipeline for a J0-contractive f. Fails with NotContractiveInput when f is not.
JInnerApproximant j_inner_approximate(const DiscFunction& f, const SignatureSpace& sig, int m,
                                      std::size_t degree = 16);

// ---------------------------------------------------------------------------
// Krein-Langer

/// F = B^{-1} L (left) or F = L B^{-1} (right) with B a Blaschke-Potapov product and L a contractive polynomial.
struct KreinLangerPair {
  BlaschkePotapovProduct b;
  MatrixPolynomial l;

  void validate(double tol = 1e-9) const;
};

enum class KreinLangerMode { Compact, Circle };

struct KreinLangerApproximant {
  DiscFunction f_m;
  int m = 0;
  double hull_residual = 0.0;  // circle mode only
  std::size_t atoms = 0;
};

/// B(z)^{-1}; PoleHit at zeros of det B.
CMatrix bp_inverse(const BlaschkePotapovProduct& b, Complex z);

KreinLangerApproximant krein_langer_approximate(const KreinLangerPair& pair, int m,
                                                KreinLangerMode mode = KreinLangerMode::Compact, double eps = 0.1);
KreinLangerApproximant right_krein_langer_approximate(const KreinLangerPair& pair, int m,
                                                      KreinLangerMode mode = KreinLangerMode::Compact,
                                                      double eps = 0.1);

struct KreinLangerFit {
  KreinLangerPair pair;
  double defect = 0.0;  // sampled || F - B^{-1} L ||
};

/// One rank-one factor per simple pole, projection along the residue; L = B F by Taylor sampling.
KreinLangerFit krein_langer_from_poles(const DiscFunction& f, const std::vector<Complex>& poles, std::size_t degree);

/// Meromorphic J0 pipeline: transform, factor over the given poles, approximate, transform back.
DiscFunction j_meromorphic_approximate(const DiscFunction& f, const SignatureSpace& sig,
                                       const std::vector<Complex>& poles, int m, std::size_t degree = 16);

}  // namespace innerapprox

#endif  // INNERAPPROX_INDEFINITE_HPP

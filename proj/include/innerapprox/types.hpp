#ifndef INNERAPPROX_TYPES_HPP
#define INNERAPPROX_TYPES_HPP

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace innerapprox {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Pointwise matrix function on the disc.
using DiscFunction = std::function<CMatrix(Complex)>;
/// Pointwise matrix function on the bidisc.
using BidiscFunction = std::function<CMatrix(Complex, Complex)>;

enum class ErrorKind {
  SingularResolvent,
  DimensionMismatch,
  NotContractive,
  NotSquare,
  DegenerateDenominator,
  NotContractiveInput,
  DepthTooSmall,
  IndexOutOfRange,
  InvalidRadius,
  PoleHit,
  NotInner,
  NotUnitary,
  SingularBlock,
  CornerDegenerate,
  BudgetExhausted,
  InvalidArgument,
  ParseError,
  InvariantViolation,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// State-space system [A B; C D] on C^N (+) C^d with transfer A + zB(I - zD)^{-1}C.
///
/// The output and input spaces have the same dimension N; the state space has
/// dimension d (possibly zero).
struct Colligation {
  CMatrix a;  // N x N
  CMatrix b;  // N x d
  CMatrix c;  // d x N
  CMatrix d;  // d x d

  Colligation() = default;
  Colligation(CMatrix a_, CMatrix b_, CMatrix c_, CMatrix d_);

  Index n_out() const { return a.rows(); }
  Index n_state() const { return d.rows(); }

  /// Assembled system matrix T = [A B; C D].
  CMatrix system_matrix() const;

  /// Splits a square (N+d) x (N+d) system matrix.
  static Colligation from_system_matrix(const CMatrix& t, Index n_out);

  void validate() const;
};

/// Matrix polynomial sum_k coeffs[k] z^k, constant term first.
struct MatrixPolynomial {
  std::vector<CMatrix> coeffs;

  MatrixPolynomial() = default;
  explicit MatrixPolynomial(std::vector<CMatrix> c);

  Index size() const { return coeffs.empty() ? 0 : coeffs.front().rows(); }
  std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
};

/// Split of the state space for bidisc realizations: Z = z1 I_{d1} (+) z2 I_{d2}.
struct BidiscSplit {
  Index d1 = 0;
  Index d2 = 0;

  Index total() const { return d1 + d2; }
};

/// Signature (p, q) with J0 = diag(I_p, -I_q), P = (I + J0)/2, Q = (I - J0)/2.
struct SignatureSpace {
  Index p = 0;
  Index q = 0;
  CMatrix j0;
  CMatrix proj_p;
  CMatrix proj_q;

  SignatureSpace() = default;
  SignatureSpace(Index p_, Index q_);

  Index size() const { return p + q; }
};

/// Equally spaced points r e^{2 pi i j / size} on a circle.
struct CircleGrid {
  std::vector<Complex> points;
  double radius = 1.0;

  CircleGrid() = default;
  explicit CircleGrid(std::size_t size, double radius = 1.0, double phase = 0.0);

  std::size_t size() const { return points.size(); }
};

/// Product grid on the torus {|z1| = r, |z2| = r}.
struct TorusGrid {
  std::vector<std::pair<Complex, Complex>> points;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  double radius = 1.0;

  TorusGrid() = default;
  TorusGrid(std::size_t n1, std::size_t n2, double radius = 1.0);

  std::size_t size() const { return points.size(); }
};

}  // namespace innerapprox

#endif  // INNERAPPROX_TYPES_HPP

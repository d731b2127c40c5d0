#include "innerapprox/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

namespace innerapprox {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SingularResolvent: return "SingularResolvent";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotContractive: return "NotContractive";
    case ErrorKind::NotSquare: return "NotSquare";
    case ErrorKind::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorKind::NotContractiveInput: return "NotContractiveInput";
    case ErrorKind::DepthTooSmall: return "DepthTooSmall";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::InvalidRadius: return "InvalidRadius";
    case ErrorKind::PoleHit: return "PoleHit";
    case ErrorKind::NotInner: return "NotInner";
    case ErrorKind::NotUnitary: return "NotUnitary";
    case ErrorKind::SingularBlock: return "SingularBlock";
    case ErrorKind::CornerDegenerate: return "CornerDegenerate";
    case ErrorKind::BudgetExhausted: return "BudgetExhausted";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

Colligation::Colligation(CMatrix a_, CMatrix b_, CMatrix c_, CMatrix d_)
    : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {
  validate();
}

void Colligation::validate() const {
  const Index n = a.rows();
  const Index s = d.rows();
  if (a.cols() != n || b.rows() != n || b.cols() != s || c.rows() != s || c.cols() != n ||
      d.cols() != s) {
    throw Error(ErrorKind::DimensionMismatch, "colligation blocks inconsistent with (N, d)");
  }
  if (!a.allFinite() || !b.allFinite() || !c.allFinite() || !d.allFinite()) {
    throw Error(ErrorKind::InvalidArgument, "colligation has non-finite entries");
  }
}

CMatrix Colligation::system_matrix() const {
  const Index n = n_out();
  const Index s = n_state();
  CMatrix t(n + s, n + s);
  t << a, b, c, d;
  return t;
}

Colligation Colligation::from_system_matrix(const CMatrix& t, Index n_out) {
  if (t.rows() != t.cols() || n_out > t.rows() || n_out < 0) {
    throw Error(ErrorKind::DimensionMismatch, "system matrix must be square with N <= size");
  }
  const Index s = t.rows() - n_out;
  return Colligation(t.topLeftCorner(n_out, n_out), t.topRightCorner(n_out, s),
                     t.bottomLeftCorner(s, n_out), t.bottomRightCorner(s, s));
}

MatrixPolynomial::MatrixPolynomial(std::vector<CMatrix> c) : coeffs(std::move(c)) {
  if (coeffs.empty()) throw Error(ErrorKind::InvalidArgument, "polynomial needs a constant term");
  const Index n = coeffs.front().rows();
  for (const auto& m : coeffs) {
    if (m.rows() != n || m.cols() != n) {
      throw Error(ErrorKind::DimensionMismatch, "polynomial coefficients must be N x N");
    }
  }
}

SignatureSpace::SignatureSpace(Index p_, Index q_) : p(p_), q(q_) {
  if (p <= 0 || q <= 0) throw Error(ErrorKind::InvalidArgument, "signature needs p > 0 and q > 0");
  const Index n = p + q;
  j0 = CMatrix::Identity(n, n);
  j0.bottomRightCorner(q, q) *= -1.0;
  proj_p = CMatrix::Zero(n, n);
  proj_p.topLeftCorner(p, p).setIdentity();
  proj_q = CMatrix::Zero(n, n);
  proj_q.bottomRightCorner(q, q).setIdentity();
}

CircleGrid::CircleGrid(std::size_t size, double r, double phase) : radius(r) {
  points.reserve(size);
  for (std::size_t j = 0; j < size; ++j) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(size) + phase;
    points.push_back(std::polar(r, theta));
  }
}

TorusGrid::TorusGrid(std::size_t a, std::size_t b, double r) : n1(a), n2(b), radius(r) {
  const CircleGrid g1(a, r);
  const CircleGrid g2(b, r);
  points.reserve(a * b);
  for (const auto& z1 : g1.points)
    for (const auto& z2 : g2.points) points.emplace_back(z1, z2);
}

CMatrix pseudo_inverse(const CMatrix& m, double rel_tol) {
  if (m.size() == 0) return CMatrix::Zero(m.cols(), m.rows());
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cutoff = rel_tol * std::max(1.0, sv(0));
  Eigen::VectorXd inv(sv.size());
  for (Index i = 0; i < sv.size(); ++i) inv(i) = sv(i) > cutoff ? 1.0 / sv(i) : 0.0;
  return svd.matrixV() * inv.cast<Complex>().asDiagonal() * svd.matrixU().adjoint();
}

CMatrix solve_resolvent(const CMatrix& m, const CMatrix& rhs) {
  const Index s = m.rows();
  const CMatrix lhs = CMatrix::Identity(s, s) - m;
  Eigen::PartialPivLU<CMatrix> lu(lhs);
  const double rcond = lu.rcond();
  if (!(rcond * kResolventConditionLimit > 1.0)) {
    throw Error(ErrorKind::SingularResolvent, "I - zD is numerically singular");
  }
  return lu.solve(rhs);
}

CMatrix eval_transfer_disc(const Colligation& col, Complex z) {
  if (col.n_state() == 0) return col.a;
  const CMatrix x = solve_resolvent(z * col.d, col.c);
  return col.a + z * (col.b * x);
}

CMatrix eval_transfer_bidisc(const Colligation& col, const BidiscSplit& split, Complex z1, Complex z2) {
  if (split.d1 < 0 || split.d2 < 0 || split.total() != col.n_state()) {
    throw Error(ErrorKind::DimensionMismatch, "bidisc split does not match state dimension");
  }
  if (col.n_state() == 0) return col.a;
  Eigen::VectorXcd zdiag(col.n_state());
  zdiag.head(split.d1).setConstant(z1);
  zdiag.tail(split.d2).setConstant(z2);
  // A + BZ(I - DZ)^{-1}C
  const CMatrix dz = col.d * zdiag.asDiagonal();
  const CMatrix x = solve_resolvent(dz, col.c);
  return col.a + col.b * (zdiag.asDiagonal() * x);
}

CMatrix eval_polynomial(const MatrixPolynomial& p, Complex z) {
  if (p.coeffs.empty()) throw Error(ErrorKind::InvalidArgument, "empty polynomial");
  CMatrix acc = p.coeffs.back();
  for (auto it = p.coeffs.rbegin() + 1; it != p.coeffs.rend(); ++it) acc = (acc * z + *it).eval();
  return acc;
}

DiscFunction as_function(const Colligation& col) {
  return [col](Complex z) { return eval_transfer_disc(col, z); };
}

DiscFunction as_function(const MatrixPolynomial& p) {
  return [p](Complex z) { return eval_polynomial(p, z); };
}

Defects defect_operators(const CMatrix& t) {
  if (t.rows() != t.cols()) throw Error(ErrorKind::NotSquare, "defect operators need a square matrix");
  const double norm = operator_norm(t);
  if (norm > 1.0 + 1e-10) {
    throw Error(ErrorKind::NotContractive, "||T|| = " + std::to_string(norm));
  }
  const Index n = t.rows();
  const CMatrix id = CMatrix::Identity(n, n);
  return {psd_sqrt(id - t.adjoint() * t), psd_sqrt(id - t * t.adjoint())};
}

MatrixCheck is_contraction(const CMatrix& m, double tol) {
  const double s = operator_norm(m);
  return {s <= 1.0 + tol, s - 1.0};
}

MatrixCheck is_unitary(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::NotSquare, "unitarity needs a square matrix");
  const CMatrix id = CMatrix::Identity(m.rows(), m.cols());
  const double d1 = operator_norm(m.adjoint() * m - id);
  const double d2 = operator_norm(m * m.adjoint() - id);
  const double defect = std::max(d1, d2);
  return {defect <= tol, defect};
}

SupNorm sup_norm_estimate(const DiscFunction& f, const std::vector<Complex>& points) {
  std::vector<double> norms(points.size(), 0.0);
  parallel_for(points.size(), [&](std::size_t i) { norms[i] = operator_norm(f(points[i])); });
  double best = 0.0;
  for (double v : norms) best = std::max(best, v);
  return {best, points.size()};
}

SupNorm sup_norm_estimate(const DiscFunction& f, const CircleGrid& grid) {
  return sup_norm_estimate(f, grid.points);
}

SupNorm sup_norm_estimate(const BidiscFunction& f, const TorusGrid& grid) {
  std::vector<double> norms(grid.size(), 0.0);
  parallel_for(grid.size(), [&](std::size_t i) {
    norms[i] = operator_norm(f(grid.points[i].first, grid.points[i].second));
  });
  double best = 0.0;
  for (double v : norms) best = std::max(best, v);
  return {best, grid.size()};
}

CMatrix complex_gaussian(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix m(rows, cols);
  // Column-major fill order is part of the seeded contract.
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = Complex(re, im) / std::sqrt(2.0);
    }
  return m;
}

CMatrix random_unitary(Index n, Rng& rng) {
  const CMatrix g = complex_gaussian(n, n, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index i = 0; i < n; ++i) {
    const Complex d = r(i, i);
    const double a = std::abs(d);
    if (a > 0) q.col(i) *= d / a;
  }
  return q;
}

CMatrix random_contraction(Index rows, Index cols, Rng& rng, double norm) {
  CMatrix g = complex_gaussian(rows, cols, rng);
  const double s = operator_norm(g);
  if (s > 0) g *= norm / s;
  return g;
}

Colligation random_colligation(Index n_out, Index n_state, std::uint64_t seed, double norm) {
  Rng rng(seed);
  const CMatrix t = random_contraction(n_out + n_state, n_out + n_state, rng, norm);
  return Colligation::from_system_matrix(t, n_out);
}

Complex random_disc_point(Rng& rng, double radius) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = radius * std::sqrt(u(rng));
  const double theta = 2.0 * std::numbers::pi * u(rng);
  return std::polar(r, theta);
}

unsigned thread_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("INNERAPPROX_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) hw = std::min<unsigned>(hw, static_cast<unsigned>(v));
  }
  return hw;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const unsigned workers = std::min<std::size_t>(thread_count(), n);
  if (workers <= 1 || n < 64) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace innerapprox

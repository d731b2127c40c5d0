#include "innerapprox/realization.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>

namespace innerapprox {

namespace {

constexpr double kDenominatorFloor = 1e-13;
constexpr double kMatchTarget = 1e-8;

Complex checked_denominator(Complex z, Complex w) {
  const Complex den = 1.0 - z * std::conj(w);
  if (std::abs(den) < kDenominatorFloor) {
    throw Error(ErrorKind::DegenerateDenominator, "1 - z conj(w) vanishes");
  }
  return den;
}

CMatrix hermitian_part(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

// Columns of g with g g* = h on the leading eigenvalues; clipped below rel_tol * max.
CMatrix psd_factor(const CMatrix& h, double rel_tol, Eigen::VectorXd* eigenvalues = nullptr) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(h));
  const Eigen::VectorXd ev = es.eigenvalues();
  if (eigenvalues) *eigenvalues = ev;
  const double top = ev.size() ? std::max(ev.maxCoeff(), 0.0) : 0.0;
  std::vector<Index> keep;
  for (Index i = ev.size() - 1; i >= 0; --i)
    if (ev(i) > rel_tol * top && ev(i) > 0.0) keep.push_back(i);
  CMatrix g(h.rows(), static_cast<Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j)
    g.col(static_cast<Index>(j)) = es.eigenvectors().col(keep[j]) * std::sqrt(ev(keep[j]));
  return g;
}

CMatrix nearest_isometry(const CMatrix& v) {
  Eigen::JacobiSVD<CMatrix> svd(v, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

CMatrix clip_singular_values(const CMatrix& v) {
  Eigen::JacobiSVD<CMatrix> svd(v, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::VectorXd s = svd.singularValues();
  for (Index i = 0; i < s.size(); ++i) s(i) = std::min(s(i), 1.0);
  return svd.matrixU() * s.cast<Complex>().asDiagonal() * svd.matrixV().adjoint();
}

double validation_residual(const Colligation& col, const MatrixPolynomial& p) {
  double worst = 0.0;
  for (double radius : {0.3, 0.8}) {
    const CircleGrid g(12, radius, 0.37);
    for (const auto& z : g.points)
      worst = std::max(worst, operator_norm(eval_transfer_disc(col, z) - eval_polynomial(p, z)));
  }
  return worst;
}

}  // namespace

CMatrix schur_kernel(const DiscFunction& f, Complex z, Complex w) {
  const Complex den = checked_denominator(z, w);
  const CMatrix fz = f(z);
  const CMatrix fw = f(w);
  return (CMatrix::Identity(fz.rows(), fz.rows()) - fz * fw.adjoint()) / den;
}

CMatrix j_schur_kernel(const DiscFunction& f, const SignatureSpace& sig, Complex z, Complex w) {
  const Complex den = checked_denominator(z, w);
  const CMatrix fz = f(z);
  const CMatrix fw = f(w);
  if (fz.rows() != sig.size()) throw Error(ErrorKind::DimensionMismatch, "signature size differs from F");
  return (sig.j0 - fz * sig.j0 * fw.adjoint()) / den;
}

namespace {

KernelSample assemble(const std::vector<Complex>& points, const std::vector<CMatrix>& values,
                      const CMatrix& j) {
  KernelSample s;
  s.points = points;
  const std::size_t k = points.size();
  const Index n = j.rows();
  s.n = n;
  s.blocks = CMatrix::Zero(static_cast<Index>(k) * n, static_cast<Index>(k) * n);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) {
      const Complex den = checked_denominator(points[a], points[b]);
      s.blocks.block(static_cast<Index>(a) * n, static_cast<Index>(b) * n, n, n) =
          (j - values[a] * j * values[b].adjoint()) / den;
    }
  s.blocks = hermitian_part(s.blocks);
  return s;
}

}  // namespace

KernelSample kernel_sample(const DiscFunction& f, const std::vector<Complex>& points) {
  std::vector<CMatrix> values;
  for (const auto& z : points) values.push_back(f(z));
  const Index n = values.empty() ? 0 : values.front().rows();
  return assemble(points, values, CMatrix::Identity(n, n));
}

KernelSample j_kernel_sample(const DiscFunction& f, const SignatureSpace& sig, const std::vector<Complex>& points) {
  std::vector<CMatrix> values;
  for (const auto& z : points) values.push_back(f(z));
  return assemble(points, values, sig.j0);
}

NegativeSquaresReport negative_squares(const KernelSample& sample, double tol) {
  NegativeSquaresReport r;
  r.sample_count = sample.points.size();
  r.tolerance = tol;
  if (sample.blocks.rows() == 0) return r;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(sample.blocks), Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = es.eigenvalues();
  r.eigenvalue_floor = ev.minCoeff();
  for (Index i = 0; i < ev.size(); ++i)
    if (ev(i) < -tol) ++r.negative_eigenvalues;
  return r;
}

Colligation shift_realization(const MatrixPolynomial& p) {
  const Index n = p.size();
  const Index deg = static_cast<Index>(p.degree());
  const Index d = deg * n;
  CMatrix a = p.coeffs[0];
  CMatrix b(n, d), c = CMatrix::Zero(d, n), dd = CMatrix::Zero(d, d);
  // state x_k carries z^{k} u; output picks coeffs[k+1]
  for (Index k = 0; k < deg; ++k) b.middleCols(k * n, n) = p.coeffs[static_cast<std::size_t>(k + 1)];
  if (d > 0) c.topRows(n).setIdentity();
  for (Index k = 1; k < deg; ++k) dd.block(k * n, (k - 1) * n, n, n).setIdentity();
  return Colligation(a, b, c, dd);
}

MatrixPolynomial spectral_cofactor(const MatrixPolynomial& p, double tol, int max_rows) {
  const Index n = p.size();
  const Index deg = static_cast<Index>(p.degree());
  const CMatrix id = CMatrix::Identity(n, n);

  // Fourier coefficients Q_l (l >= 0) of I - p p* on the circle
  std::vector<CMatrix> q(static_cast<std::size_t>(deg + 1), CMatrix::Zero(n, n));
  q[0] = id;
  for (Index l = 0; l <= deg; ++l)
    for (Index b = 0; b + l <= deg; ++b)
      q[static_cast<std::size_t>(l)] -= p.coeffs[static_cast<std::size_t>(b + l)] * p.coeffs[static_cast<std::size_t>(b)].adjoint();

  double scale = 0.0;
  for (const auto& m : q) scale = std::max(scale, operator_norm(m));
  std::vector<CMatrix> zero(static_cast<std::size_t>(deg + 1), CMatrix::Zero(n, n));
  if (scale < 1e-14) return MatrixPolynomial(zero);

  // Banded block Cholesky of the Toeplitz matrix T_ij = Q_{i-j}; row i stored by
  // offset o = i - k. The last row tends to the outer factor.
  std::deque<std::vector<CMatrix>> rows;
  std::deque<CMatrix> diag_pinv;
  std::vector<CMatrix> previous;
  for (int i = 0; i < max_rows; ++i) {
    std::vector<CMatrix> row(static_cast<std::size_t>(deg + 1), CMatrix::Zero(n, n));
    const Index band = std::min<Index>(deg, i);
    // rows.back() is row i-1, rows[rows.size()-o] is row i-o
    for (Index o = band; o >= 1; --o) {
      const auto& rk = rows[rows.size() - static_cast<std::size_t>(o)];
      CMatrix rhs = q[static_cast<std::size_t>(o)];
      // sum over j from i - band to k - 1, offsets relative to row i: oi = i - j, row k: ok = oi - o
      for (Index oi = band; oi > o; --oi) rhs -= row[static_cast<std::size_t>(oi)] * rk[static_cast<std::size_t>(oi - o)].adjoint();
      row[static_cast<std::size_t>(o)] = rhs * diag_pinv[diag_pinv.size() - static_cast<std::size_t>(o)];
    }
    CMatrix s = q[0];
    for (Index o = 1; o <= band; ++o) s -= row[static_cast<std::size_t>(o)] * row[static_cast<std::size_t>(o)].adjoint();
    row[0] = psd_sqrt(s, 0.0);
    rows.push_back(row);
    diag_pinv.push_back(pseudo_inverse(row[0], 1e-12));
    if (static_cast<Index>(rows.size()) > deg + 1) {
      rows.pop_front();
      diag_pinv.pop_front();
    }
    if (i > deg && !previous.empty()) {
      double diff = 0.0;
      for (Index o = 0; o <= deg; ++o)
        diff = std::max(diff, operator_norm(row[static_cast<std::size_t>(o)] - previous[static_cast<std::size_t>(o)]));
      if (diff <= tol * std::max(1.0, scale)) {
        previous = row;
        break;
      }
    }
    previous = row;
  }
  return MatrixPolynomial(previous);
}

RealizationReport contractive_realization_report(const MatrixPolynomial& p, std::size_t sample_count,
                                                 double rank_tol) {
  const Index n = p.size();
  const Index deg = static_cast<Index>(p.degree());
  const std::size_t k = sample_count ? sample_count : static_cast<std::size_t>(2 * (deg + 1));
  const DiscFunction pf = as_function(p);

  const CircleGrid samples(k, 0.5);
  {
    Eigen::VectorXd ev;
    psd_factor(kernel_sample(pf, samples.points).blocks, 1.0, &ev);
    if (ev.size() && ev.minCoeff() < -1e-6) {
      throw Error(ErrorKind::NotContractiveInput, "kernel Gram has a negative eigenvalue; sup |p| exceeds 1");
    }
    const double sup = sup_norm_estimate(pf, CircleGrid(4096)).value;
    if (sup > 1.0 + 1e-6) throw Error(ErrorKind::NotContractiveInput, "sampled sup norm " + std::to_string(sup));
  }

  RealizationReport report;
  if (deg == 0 || samples.points.empty()) {
    report.col = Colligation(p.coeffs[0], CMatrix::Zero(n, 0), CMatrix::Zero(0, n), CMatrix::Zero(0, 0));
    return report;
  }

  const MatrixPolynomial r = spectral_cofactor(p);
  std::vector<CMatrix> pw, rw;
  for (const auto& w : samples.points) {
    pw.push_back(eval_polynomial(p, w));
    rw.push_back(eval_polynomial(r, w));
  }
  // kernel of the co-isometric row [p R]
  const Index kn = static_cast<Index>(k) * n;
  CMatrix gram(kn, kn);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) {
      const Complex den = 1.0 - samples.points[a] * std::conj(samples.points[b]);
      gram.block(static_cast<Index>(a) * n, static_cast<Index>(b) * n, n, n) =
          (CMatrix::Identity(n, n) - pw[a] * pw[b].adjoint() - rw[a] * rw[b].adjoint()) / den;
    }
  gram = hermitian_part(gram);

  Eigen::SelfAdjointEigenSolver<CMatrix> es(gram);
  const Eigen::VectorXd ev = es.eigenvalues();
  const double top = std::max(ev.maxCoeff(), 0.0);
  Index rank = 0;
  for (Index i = 0; i < ev.size(); ++i)
    if (ev(i) > rank_tol * top && top > 0.0) ++rank;
  report.numerical_rank = rank;

  if (rank == 0) {
    report.col = Colligation(p.coeffs[0], CMatrix::Zero(n, 0), CMatrix::Zero(0, n), CMatrix::Zero(0, 0));
    report.validation_residual = validation_residual(report.col, p);
    return report;
  }

  bool have = false;
  for (Index d = rank; d <= kn; ++d) {
    CMatrix h(kn, d);
    for (Index j = 0; j < d; ++j) {
      const Index idx = ev.size() - 1 - j;
      h.col(j) = es.eigenvectors().col(idx) * std::sqrt(std::max(ev(idx), 0.0));
    }
    CMatrix x(d + n, kn), y(d + 2 * n, kn);
    for (std::size_t i = 0; i < k; ++i) {
      const Index c0 = static_cast<Index>(i) * n;
      const CMatrix hi_star = h.middleRows(c0, n).adjoint();
      x.block(0, c0, d, n) = std::conj(samples.points[i]) * hi_star;
      x.block(d, c0, n, n).setIdentity();
      y.block(0, c0, d, n) = hi_star;
      y.block(d, c0, n, n) = pw[i].adjoint();
      y.block(d + n, c0, n, n) = rw[i].adjoint();
    }
    const CMatrix v = clip_singular_values(y * pseudo_inverse(x, 1e-12));

    // norm preservation on the spanning vectors [conj(w_i) H_i* e; e]
    const CMatrix vx = v * x;
    double iso = 0.0;
    for (Index j = 0; j < kn; ++j) iso = std::max(iso, std::abs(vx.col(j).norm() - x.col(j).norm()));

    const CMatrix vs = v.adjoint();  // (d + n) x (d + 2n)
    Colligation col(vs.block(d, d, n, n), vs.block(d, 0, n, d), vs.block(0, d, d, n), vs.block(0, 0, d, d));
    const double res = validation_residual(col, p);
    if (!have || res < report.validation_residual) {
      report.col = col;
      report.validation_residual = res;
      report.isometry_defect = iso;
      have = true;
    }
    if (res <= kMatchTarget) break;
  }
  report.rank_warning = report.col.n_state() > deg * n;
  return report;
}

Colligation contractive_realization(const MatrixPolynomial& p, std::size_t sample_count, double rank_tol) {
  return contractive_realization_report(p, sample_count, rank_tol).col;
}

MatrixPolynomial strictify(const MatrixPolynomial& p, double delta, double r) {
  if (!(delta >= 0.0 && delta < 1.0)) throw Error(ErrorKind::InvalidArgument, "delta must lie in [0, 1)");
  if (!(r >= 0.0 && r <= 1.0)) throw Error(ErrorKind::InvalidRadius, "r must lie in [0, 1]");
  std::vector<CMatrix> c = p.coeffs;
  double scale = 1.0 - delta;
  for (auto& ck : c) {
    ck *= scale;
    scale *= r;
  }
  return MatrixPolynomial(std::move(c));
}

Colligation darlington_completion(const MatrixPolynomial& p) {
  const Index n = p.size();
  const Index deg = static_cast<Index>(p.degree());
  const MatrixPolynomial r = spectral_cofactor(p);
  const std::size_t terms = static_cast<std::size_t>(deg + 1);

  // coefficients of the row [p R]
  std::vector<CMatrix> phi(terms, CMatrix(n, 2 * n));
  for (std::size_t k = 0; k < terms; ++k) phi[k] << p.coeffs[k], r.coeffs[k];

  const Index s = deg * n;
  CMatrix g(s, 0);
  if (s > 0) {
    auto delta = [&](Index i, Index j) {
      CMatrix m = -phi[static_cast<std::size_t>(i)] * phi[static_cast<std::size_t>(j)].adjoint();
      if (i == 0 && j == 0) m += CMatrix::Identity(n, n);
      return m;
    };
    CMatrix gram = CMatrix::Zero(s, s);
    for (Index i = 0; i < deg; ++i)
      for (Index j = 0; j < deg; ++j)
        for (Index t = 0; t <= std::min(i, j); ++t) gram.block(i * n, j * n, n, n) += delta(i - t, j - t);
    g = psd_factor(gram, 1e-12);
  }
  const Index rk = g.cols();
  const Index full = static_cast<Index>(terms) * n;

  // Isometry V: [conj(w) H(w)*; I] -> [H(w)*; Phi(w)*] written on the monomial basis
  CMatrix x = CMatrix::Zero(rk + n, full), y = CMatrix::Zero(rk + 2 * n, full);
  if (rk > 0) {
    x.topRightCorner(rk, s) = g.adjoint();
    y.topLeftCorner(rk, s) = g.adjoint();
  }
  x.block(rk, 0, n, n).setIdentity();
  for (std::size_t k = 0; k < terms; ++k) y.block(rk, static_cast<Index>(k) * n, 2 * n, n) = phi[k].adjoint();
  const CMatrix v = nearest_isometry(y * pseudo_inverse(x, 1e-12));

  // complete the co-isometry V* with an orthonormal basis of its kernel
  const CMatrix vs = v.adjoint();
  Eigen::JacobiSVD<CMatrix> svd(vs, Eigen::ComputeFullV);
  const Index total = rk + 2 * n;
  CMatrix u(total, total);
  u.topRows(rk + n) = vs;
  u.bottomRows(n) = svd.matrixV().rightCols(n).adjoint();

  // u is state-first; the library ordering is output-first
  const CMatrix a = u.bottomRightCorner(2 * n, 2 * n);
  const CMatrix b = u.bottomLeftCorner(2 * n, rk);
  const CMatrix c = u.topRightCorner(rk, 2 * n);
  const CMatrix d = u.topLeftCorner(rk, rk);
  return Colligation(a, b, c, d);
}

}  // namespace innerapprox

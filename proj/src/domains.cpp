#include "innerapprox/domains.hpp"

#include "innerapprox/realization.hpp"

#include <cmath>

namespace innerapprox {

namespace {

void require_two(const CMatrix& a) {
  if (a.rows() != 2 || a.cols() != 2) throw Error(ErrorKind::DimensionMismatch, "expected a 2 x 2 matrix");
}

void require_two(const Colligation& col) {
  if (col.n_out() != 2) throw Error(ErrorKind::DimensionMismatch, "expected a 2 x 2 colligation");
}

}  // namespace

bool in_gamma(const GammaPoint& pt, bool closed, double tol) {
  const double lhs = std::abs(pt.s - std::conj(pt.s) * pt.p);
  const double rhs = 1.0 - std::norm(pt.p);
  if (closed) return std::abs(pt.s) <= 2.0 + tol && lhs <= rhs + tol;
  return std::abs(pt.s) < 2.0 && lhs < rhs;
}

double bgamma_defect(const GammaPoint& pt) {
  return std::max({std::abs(pt.s) - 2.0, std::abs(std::abs(pt.p) - 1.0), std::abs(pt.s - std::conj(pt.s) * pt.p)});
}

bool on_bgamma(const GammaPoint& pt, double tol) { return bgamma_defect(pt) <= tol; }

bool in_tetra(const TetraPoint& pt, bool closed, double tol) {
  const double lhs = std::abs(pt.x1 - std::conj(pt.x2) * pt.x3) + std::abs(pt.x2 - std::conj(pt.x1) * pt.x3);
  const double rhs = 1.0 - std::norm(pt.x3);
  return closed ? lhs <= rhs + tol : lhs < rhs;
}

double btetra_defect(const TetraPoint& pt) {
  return std::max({std::abs(pt.x1 - std::conj(pt.x2) * pt.x3), std::abs(std::abs(pt.x3) - 1.0),
                   std::abs(pt.x2) - 1.0});
}

bool on_btetra(const TetraPoint& pt, double tol) { return btetra_defect(pt) <= tol; }

GammaPoint gamma_of(const CMatrix& a) {
  require_two(a);
  return {a.trace(), a.determinant()};
}

TetraPoint tetra_of(const CMatrix& a) {
  require_two(a);
  return {a(0, 0), a(1, 1), a.determinant()};
}

GammaFunction gamma_map(DiscFunction f) {
  return [f = std::move(f)](Complex z) { return gamma_of(f(z)); };
}

TetraFunction tetra_map(DiscFunction f) {
  return [f = std::move(f)](Complex z) { return tetra_of(f(z)); };
}

GammaFunction gamma_inner_approximate(const Colligation& col, int m) {
  require_two(col);
  return gamma_map(inner_approximant_disc(col, m));
}

TetraFunction tetra_inner_approximate(const Colligation& col, int m) {
  require_two(col);
  return tetra_map(inner_approximant_disc(col, m));
}

GammaFunction gamma_inner_approximate(const MatrixPolynomial& f, int m) {
  return gamma_inner_approximate(contractive_realization(f), m);
}

TetraFunction tetra_inner_approximate(const MatrixPolynomial& f, int m) {
  return tetra_inner_approximate(contractive_realization(f), m);
}

namespace {

// shared driver: boundary defect of F_m on the circle, component errors on the rho circle
template <typename Point, typename Of, typename Defect, typename Components>
DomainReport domain_report(const Colligation& col, int m, double rho, std::size_t grid, Of of, Defect defect,
                           Components components, std::size_t count) {
  require_two(col);
  const DiscFunction f = as_function(col);
  const DiscFunction fm = inner_approximant_disc(col, m);
  DomainReport rep;

  const CircleGrid circle(grid);
  std::vector<double> bd(circle.size());
  parallel_for(circle.size(), [&](std::size_t i) { bd[i] = defect(of(fm(circle.points[i]))); });
  for (double d : bd) rep.boundary_defect = std::max(rep.boundary_defect, d);
  rep.boundary_ok = rep.boundary_defect <= 1e-7;

  const CircleGrid ring(grid, rho);
  rep.component_error.assign(count, 0.0);
  double fnorm = 0.0;
  for (const auto& z : ring.points) {
    const CMatrix fz = f(z);
    fnorm = std::max(fnorm, operator_norm(fz));
    const std::vector<Complex> a = components(of(fz)), b = components(of(fm(z)));
    for (std::size_t k = 0; k < count; ++k) rep.component_error[k] = std::max(rep.component_error[k], std::abs(a[k] - b[k]));
  }
  const double tail = tail_bound(rho, m).bound;
  rep.component_bound.assign(count, tail);
  rep.component_bound[0] = count == 2 ? 2.0 * tail : tail;
  rep.component_bound[count - 1] = (2.0 + 2.0 * fnorm) * tail;
  return rep;
}

}  // namespace

DomainReport gamma_report(const Colligation& col, int m, double rho, std::size_t grid) {
  return domain_report<GammaPoint>(
      col, m, rho, grid, gamma_of, bgamma_defect,
      [](const GammaPoint& g) { return std::vector<Complex>{g.s, g.p}; }, 2);
}

DomainReport tetra_report(const Colligation& col, int m, double rho, std::size_t grid) {
  return domain_report<TetraPoint>(
      col, m, rho, grid, tetra_of, btetra_defect,
      [](const TetraPoint& t) { return std::vector<Complex>{t.x1, t.x2, t.x3}; }, 3);
}

}  // namespace innerapprox

#ifndef INNERAPPROX_DOMAINS_HPP
#define INNERAPPROX_DOMAINS_HPP

#include "innerapprox/dilation.hpp"

namespace innerapprox {

/// Point (s, p) of the symmetrized bidisc.
struct GammaPoint {
  Complex s;
  Complex p;
};

/// Point (x1, x2, x3) of the tetrablock.
struct TetraPoint {
  Complex x1;
  Complex x2;
  Complex x3;
};

/// |s| <= 2 and |s - conj(s) p| <= 1 - |p|^2 (strict when closed = false).
bool in_gamma(const GammaPoint& pt, bool closed, double tol = 1e-10);
/// |s| <= 2, |p| = 1 and s = conj(s) p.
bool on_bgamma(const GammaPoint& pt, double tol = 1e-10);
/// |x1 - conj(x2) x3| + |x2 - conj(x1) x3| <= 1 - |x3|^2 (strict when closed = false).
bool in_tetra(const TetraPoint& pt, bool closed, double tol = 1e-10);
/// x1 = conj(x2) x3, |x3| = 1 and |x2| <= 1.
bool on_btetra(const TetraPoint& pt, double tol = 1e-10);

GammaPoint gamma_of(const CMatrix& a);
TetraPoint tetra_of(const CMatrix& a);

using GammaFunction = std::function<GammaPoint(Complex)>;
using TetraFunction = std::function<TetraPoint(Complex)>;

GammaFunction gamma_map(DiscFunction f);
TetraFunction tetra_map(DiscFunction f);

/// (tr F_m, det F_m) with F_m the depth-m inner approximant of a 2 x 2 colligation.
GammaFunction gamma_inner_approximate(const Colligation& col, int m);
/// ((F_m)_11, (F_m)_22, det F_m).
TetraFunction tetra_inner_approximate(const Colligation& col, int m);
/// Polynomial inputs go through the contractive realization first.
GammaFunction gamma_inner_approximate(const MatrixPolynomial& f, int m);
TetraFunction tetra_inner_approximate(const MatrixPolynomial& f, int m);

struct DomainReport {
  double boundary_defect = 0.0;  // worst distance from the distinguished boundary on the circle
  bool boundary_ok = false;
  std::vector<double> component_error;  // sup over the rho grid, per component
  std::vector<double> component_bound;
};

/// Boundary membership on the circle grid (1e-7) and componentwise convergence on the rho grid.
DomainReport gamma_report(const Colligation& col, int m, double rho, std::size_t grid = 256);
DomainReport tetra_report(const Colligation& col, int m, double rho, std::size_t grid = 256);

/// Residuals of the boundary conditions; zero on the distinguished boundary.
double bgamma_defect(const GammaPoint& pt);
double btetra_defect(const TetraPoint& pt);

}  // namespace innerapprox

#endif  // INNERAPPROX_DOMAINS_HPP

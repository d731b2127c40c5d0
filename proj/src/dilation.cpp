#include "innerapprox/dilation.hpp"

#include <cmath>

namespace innerapprox {

CMatrix DilatedColligation::unitary() const { return colligation().system_matrix(); }

DilatedColligation unitary_dilation(const Colligation& col, int m) {
  if (m < 3) throw Error(ErrorKind::DepthTooSmall, "depth must be at least 3");
  const CMatrix t = col.system_matrix();
  const Defects def = defect_operators(t);  // throws NotContractive
  const Index n = col.n_out();
  const Index h = t.rows();
  const Index total = (static_cast<Index>(m) + 1) * h;

  // X_0 = H, X_1..X_{m-1} copies of H, X_m = H
  CMatrix u = CMatrix::Zero(total, total);
  const Index last = static_cast<Index>(m) * h;
  u.block(0, 0, h, h) = t;
  u.block(h, 0, h, h) = def.d_t;
  u.block(0, last, h, h) = def.d_tstar;
  u.block(h, last, h, h) = -t.adjoint();
  for (Index j = 1; j < m; ++j) u.block((j + 1) * h, j * h, h, h).setIdentity();

  DilatedColligation dil;
  dil.m = m;
  dil.n_out = n;
  dil.base_state = col.n_state();
  dil.a = u.topLeftCorner(n, n);
  dil.b_m = u.topRightCorner(n, total - n);
  dil.c_m = u.bottomLeftCorner(total - n, n);
  dil.d_m = u.bottomRightCorner(total - n, total - n);
  return dil;
}

double verify_power_dilation(const Colligation& col, const DilatedColligation& dil, int j) {
  if (j < 1 || j > dil.m) throw Error(ErrorKind::IndexOutOfRange, "power must lie in [1, m]");
  const CMatrix t = col.system_matrix();
  const CMatrix u = dil.unitary();
  const Index h = t.rows();
  CMatrix uj = u, tj = t;
  for (int k = 1; k < j; ++k) {
    uj = (uj * u).eval();
    tj = (tj * t).eval();
  }
  return operator_norm(uj.topLeftCorner(h, h) - tj);
}

DiscFunction inner_approximant_disc(const DilatedColligation& dil) { return as_function(dil.colligation()); }

DiscFunction inner_approximant_disc(const Colligation& col, int m) {
  return inner_approximant_disc(unitary_dilation(col, m));
}

BidiscFunction inner_approximant_bidisc(const Colligation& col, const BidiscSplit& split, int m) {
  const DilatedColligation dil = unitary_dilation(col, m);
  if (split.total() != dil.base_state || split.d1 < 0 || split.d2 < 0) {
    throw Error(ErrorKind::DimensionMismatch, "bidisc split does not match state dimension");
  }
  // K_m = C^{d1} (+) C^{d2} (+) rest; permute so z2 coordinates come last
  const Index s = dil.state_dim();
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(s);
  for (Index i = 0; i < s; ++i) {
    Index target;
    if (i < split.d1) target = i;
    else if (i < split.total()) target = s - split.d2 + (i - split.d1);
    else target = i - split.d2;
    perm.indices()(i) = static_cast<int>(target);
  }
  const CMatrix pm = perm.toDenseMatrix().cast<Complex>();
  const Colligation permuted(dil.a, dil.b_m * pm.adjoint(), pm * dil.c_m, pm * dil.d_m * pm.adjoint());
  const BidiscSplit big{s - split.d2, split.d2};
  return [permuted, big](Complex z1, Complex z2) { return eval_transfer_bidisc(permuted, big, z1, z2); };
}

TailBound tail_bound(double rho, int m) {
  if (!(rho >= 0.0 && rho < 1.0)) throw Error(ErrorKind::InvalidRadius, "rho must lie in [0, 1)");
  return {rho, m, 2.0 * std::pow(rho, m) / (1.0 - rho)};
}

}  // namespace innerapprox

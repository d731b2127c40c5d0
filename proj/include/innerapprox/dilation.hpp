#ifndef INNERAPPROX_DILATION_HPP
#define INNERAPPROX_DILATION_HPP

#include "innerapprox/core.hpp"

namespace innerapprox {

/// Unitary U_m = [A B_m; C_m D_m] on C^N (+) K_m with K_m = C^d (+) H^{m-1} (+) C^N (+) C^d,
/// H = C^N (+) C^d. The first N + d coordinates carry the original system matrix.
struct DilatedColligation {
  int m = 0;
  Index n_out = 0;
  Index base_state = 0;
  CMatrix a;
  CMatrix b_m;
  CMatrix c_m;
  CMatrix d_m;

  Index state_dim() const { return d_m.rows(); }
  CMatrix unitary() const;
  Colligation colligation() const { return Colligation(a, b_m, c_m, d_m); }
};

struct TailBound {
  double rho = 0.0;
  int m = 0;
  double bound = 0.0;
};

DilatedColligation unitary_dilation(const Colligation& col, int m);

/// || P_H U_m^j |_H - T^j || for 1 <= j <= m.
double verify_power_dilation(const Colligation& col, const DilatedColligation& dil, int j);

DiscFunction inner_approximant_disc(const Colligation& col, int m);
DiscFunction inner_approximant_disc(const DilatedColligation& dil);

/// Z_m keeps the base split and attaches every added coordinate to z1.
BidiscFunction inner_approximant_bidisc(const Colligation& col, const BidiscSplit& split, int m);

/// 2 rho^m / (1 - rho).
TailBound tail_bound(double rho, int m);

}  // namespace innerapprox

#endif  // INNERAPPROX_DILATION_HPP

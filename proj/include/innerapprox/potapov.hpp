#ifndef INNERAPPROX_POTAPOV_HPP
#define INNERAPPROX_POTAPOV_HPP

#include "innerapprox/core.hpp"

namespace innerapprox {

struct BlaschkeFactor {
  Complex alpha;
};

/// b_alpha P + (I - P) with P an orthogonal projection.
struct BPFactor {
  Complex alpha;
  CMatrix proj;
};

/// U * prod_k (b_{alpha_k} P_k + I - P_k), factors applied in the listed order.
struct BlaschkePotapovProduct {
  CMatrix unitary;
  std::vector<BPFactor> factors;

  Index size() const { return unitary.rows(); }
  void validate(double tol = 1e-10) const;
};

/// (z - alpha) / (1 - conj(alpha) z).
Complex eval_blaschke(Complex alpha, Complex z);
inline Complex eval_blaschke(const BlaschkeFactor& bf, Complex z) { return eval_blaschke(bf.alpha, z); }

CMatrix eval_bp_factor(const BPFactor& f, Complex z);
CMatrix eval_bp_product(const BlaschkePotapovProduct& prod, Complex z);
DiscFunction as_function(const BlaschkePotapovProduct& prod);

/// Sum of the projection ranks.
Index degree(const BlaschkePotapovProduct& prod);

/// Unitary colligation with transfer function equal to the product.
Colligation product_colligation(const BlaschkePotapovProduct& prod);
/// Colligation of F1 * F2.
Colligation cascade(const Colligation& first, const Colligation& second);

/// z -> f(r z).
struct RadialScaled {
  DiscFunction base;
  double r = 1.0;

  CMatrix operator()(Complex z) const { return base(r * z); }
};

RadialScaled radial_scale(DiscFunction f, double r);

struct InnerCheck {
  bool ok = false;
  double defect = 0.0;
};

/// max ||f(zeta)* f(zeta) - I|| over the grid; points hitting a pole are rotated by 1e-9 rad.
InnerCheck is_inner_on_circle(const DiscFunction& f, const CircleGrid& grid, double tol);

/// Seeded product: |alpha| <= 0.8, projections of random rank from QR of Gaussian blocks.
BlaschkePotapovProduct random_inner(Index n, std::size_t m_factors, std::uint64_t seed);

/// Orthogonal projection onto the column span of v.
CMatrix projection_onto(const CMatrix& v);

}  // namespace innerapprox

#endif  // INNERAPPROX_POTAPOV_HPP

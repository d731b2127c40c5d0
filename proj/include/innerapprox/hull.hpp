#ifndef INNERAPPROX_HULL_HPP
#define INNERAPPROX_HULL_HPP

#include "innerapprox/potapov.hpp"

#include <optional>

namespace innerapprox {

/// Closed-disc sampling grid: the circle plus interior rings, same count on each.
struct HullGrid {
  std::size_t boundary = 512;
  std::vector<double> radii{0.5, 0.9, 0.99};

  std::vector<Complex> points() const;
};

/// Convex combination of rational inner atoms, each stored as a unitary colligation.
struct ConvexCombination {
  std::vector<double> weights;
  std::vector<Colligation> atoms;
  double residual = 0.0;
  bool converged = true;
  std::size_t iterations = 0;
  HullGrid grid;

  CMatrix operator()(Complex z) const;
  std::size_t size() const { return atoms.size(); }
};

/// Scalar multiple of a Blaschke-Potapov product; |scale| <= 1.
struct ScaledProduct {
  Complex scale = 1.0;
  BlaschkePotapovProduct product;
};

/// Unitary colligation of b_{-a} o G, i.e. (G + a)(I + conj(a) G)^{-1}.
Colligation mobius_compose(const Colligation& g, Complex a);

/// Equal-weight atoms b_{-s w_j} o g over the M-th roots of unity; averages to (1 - s^2) g.
ConvexCombination scale_average_atoms(const Colligation& g, double s, std::size_t m_atoms);

ConvexCombination combine_products(const ConvexCombination& left, const ConvexCombination& right);
ConvexCombination unitary_left_multiply(const CMatrix& u, const ConvexCombination& comb);

/// Two constant unitaries averaging to the contraction k.
ConvexCombination constant_average(const CMatrix& k);

/// sup over the grid of ||sum w_i a_i - f||.
double measure_residual(const ConvexCombination& comb, const DiscFunction& f, const std::vector<Complex>& points);

struct FwOptions {
  std::size_t budget = 64;
  double tau = 0.02;
  std::size_t inner_steps = 200;
};

/// Frank-Wolfe with away steps on the least-squares fit over the grid; keeps the
/// combination with the best sup residual. converged = false when the budget runs out.
ConvexCombination fw_decompose(const DiscFunction& target, const std::vector<Colligation>& pool,
                               const FwOptions& options, const HullGrid& grid = {},
                               const std::optional<ConvexCombination>& warm = std::nullopt);

/// Seeded dictionary: constant unitaries, rotations of z and low-degree random products with their negatives.
std::vector<Colligation> default_atom_pool(Index n, std::uint64_t seed, std::size_t random_count = 24);

/// Averages of LFT closures of a Darlington completion of q; needs sup |q| < 1.
ConvexCombination darlington_average(const MatrixPolynomial& q, std::size_t m_atoms);

struct FisherReport {
  ConvexCombination combination;
  double r = 1.0;
  double radial_error = 0.0;
};

FisherReport fisher_pipeline(const ScaledProduct& f, double eps, std::size_t budget = 256);
FisherReport fisher_pipeline(const MatrixPolynomial& f, double eps, std::size_t budget = 256);

}  // namespace innerapprox

#endif  // INNERAPPROX_HULL_HPP

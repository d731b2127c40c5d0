#ifndef INNERAPPROX_PIPELINE_HPP
#define INNERAPPROX_PIPELINE_HPP

#include "innerapprox/dilation.hpp"

namespace innerapprox {

struct ConvergenceRow {
  int m = 0;
  double rho = 0.0;
  double grid_error = 0.0;
  double tail_bound = 0.0;
  double unitarity_defect = 0.0;
  double wall_time = 0.0;  // seconds; kept out of file outputs
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
};

/// sup over |z| = rho of ||F - F_m|| against 2 rho^m / (1 - rho), plus the unitarity
/// defect of F_m on the unit circle. Throws InvariantViolation when a row exceeds its bound.
ConvergenceReport convergence_report_disc(const Colligation& col, const std::vector<int>& ms, double rho,
                                          std::size_t grid = 256);

/// Same on the torus |z1| = |z2| = rho with an n x n grid.
ConvergenceReport convergence_report_bidisc(const Colligation& col, const BidiscSplit& split, const std::vector<int>& ms,
                                            double rho, std::size_t grid = 64);

}  // namespace innerapprox

#endif  // INNERAPPROX_PIPELINE_HPP

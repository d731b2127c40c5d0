#include "innerapprox/pipeline.hpp"

#include <chrono>

namespace innerapprox {

namespace {

double max_of(const std::vector<double>& v) {
  double out = 0.0;
  for (double x : v) out = std::max(out, x);
  return out;
}

void check_row(const ConvergenceRow& row) {
  if (row.grid_error > row.tail_bound + 1e-12) {
    throw Error(ErrorKind::InvariantViolation, "grid error " + std::to_string(row.grid_error) + " exceeds tail bound " +
                                                   std::to_string(row.tail_bound) + " at m = " + std::to_string(row.m));
  }
}

using Clock = std::chrono::steady_clock;

}  // namespace

ConvergenceReport convergence_report_disc(const Colligation& col, const std::vector<int>& ms, double rho,
                                          std::size_t grid) {
  const DiscFunction f = as_function(col);
  const CircleGrid ring(grid, rho), circle(grid);
  std::vector<CMatrix> base(ring.size());
  parallel_for(ring.size(), [&](std::size_t i) { base[i] = f(ring.points[i]); });

  ConvergenceReport rep;
  for (int m : ms) {
    const auto t0 = Clock::now();
    ConvergenceRow row;
    row.m = m;
    row.rho = rho;
    row.tail_bound = tail_bound(rho, m).bound;
    const DiscFunction fm = inner_approximant_disc(col, m);
    std::vector<double> err(ring.size()), def(circle.size());
    parallel_for(ring.size(), [&](std::size_t i) { err[i] = operator_norm(fm(ring.points[i]) - base[i]); });
    parallel_for(circle.size(), [&](std::size_t i) { def[i] = is_unitary(fm(circle.points[i]), 0.0).defect; });
    row.grid_error = max_of(err);
    row.unitarity_defect = max_of(def);
    row.wall_time = std::chrono::duration<double>(Clock::now() - t0).count();
    check_row(row);
    rep.rows.push_back(row);
  }
  return rep;
}

ConvergenceReport convergence_report_bidisc(const Colligation& col, const BidiscSplit& split, const std::vector<int>& ms,
                                            double rho, std::size_t grid) {
  const TorusGrid torus(grid, grid, rho), unit(grid, grid);
  std::vector<CMatrix> base(torus.size());
  parallel_for(torus.size(), [&](std::size_t i) {
    base[i] = eval_transfer_bidisc(col, split, torus.points[i].first, torus.points[i].second);
  });

  ConvergenceReport rep;
  for (int m : ms) {
    const auto t0 = Clock::now();
    ConvergenceRow row;
    row.m = m;
    row.rho = rho;
    row.tail_bound = tail_bound(rho, m).bound;
    const BidiscFunction fm = inner_approximant_bidisc(col, split, m);
    std::vector<double> err(torus.size()), def(unit.size());
    parallel_for(torus.size(), [&](std::size_t i) {
      err[i] = operator_norm(fm(torus.points[i].first, torus.points[i].second) - base[i]);
    });
    parallel_for(unit.size(), [&](std::size_t i) {
      def[i] = is_unitary(fm(unit.points[i].first, unit.points[i].second), 0.0).defect;
    });
    row.grid_error = max_of(err);
    row.unitarity_defect = max_of(def);
    row.wall_time = std::chrono::duration<double>(Clock::now() - t0).count();
    check_row(row);
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace innerapprox

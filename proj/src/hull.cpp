#include "innerapprox/hull.hpp"

#include "innerapprox/realization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace innerapprox {

namespace {

constexpr double kInnerTol = 1e-8;

Colligation constant_atom(const CMatrix& u) {
  const Index n = u.rows();
  return Colligation(u, CMatrix::Zero(n, 0), CMatrix::Zero(0, n), CMatrix::Zero(0, 0));
}

ConvexCombination single(const Colligation& atom) {
  ConvexCombination c;
  c.weights = {1.0};
  c.atoms = {atom};
  return c;
}

// Unimodular pair averaging to kappa.
std::pair<Complex, Complex> unimodular_split(Complex kappa) {
  const double mod = std::abs(kappa);
  if (mod >= 1.0) return {kappa / mod, kappa / mod};
  const Complex dir = mod > 0.0 ? kappa / mod : Complex(1.0, 0.0);
  const Complex off = Complex(0.0, 1.0) * dir * std::sqrt(1.0 - mod * mod);
  return {kappa + off, kappa - off};
}

double sup_deviation(const DiscFunction& f, const DiscFunction& g, const std::vector<Complex>& points) {
  std::vector<double> v(points.size(), 0.0);
  parallel_for(points.size(), [&](std::size_t i) { v[i] = operator_norm(f(points[i]) - g(points[i])); });
  return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

// Smallest r in [0, 1] (up to bisection resolution) with sup |f - f_r| <= target.
double radial_bisection(const DiscFunction& f, double target, const std::vector<Complex>& points) {
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 40; ++it) {
    const double mid = 0.5 * (lo + hi);
    const DiscFunction fr = radial_scale(f, mid);
    if (sup_deviation(f, fr, points) <= target) hi = mid;
    else lo = mid;
  }
  return hi;
}

struct Dictionary {
  CMatrix samples;  // (points * n * n) x atoms
  std::vector<Index> degree;
};

CVector flatten_samples(const DiscFunction& f, const std::vector<Complex>& points, Index n) {
  CVector out(static_cast<Index>(points.size()) * n * n);
  parallel_for(points.size(), [&](std::size_t i) {
    const CMatrix v = f(points[i]);
    out.segment(static_cast<Index>(i) * n * n, n * n) = Eigen::Map<const CVector>(v.data(), n * n);
  });
  return out;
}

double sup_of_flat(const CVector& r, Index n, std::size_t count) {
  double worst = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const Eigen::Map<const CMatrix> m(r.data() + static_cast<Index>(i) * n * n, n, n);
    worst = std::max(worst, n == 1 ? std::abs(m(0, 0)) : operator_norm(CMatrix(m)));
  }
  return worst;
}

// Lower objective first, then lower degree, then lower index.
bool prefer(double value, Index deg, double best_value, Index best_deg, double scale) {
  const double slack = 1e-12 * std::max(1.0, scale);
  if (value < best_value - slack) return true;
  if (value > best_value + slack) return false;
  return deg < best_deg;
}

}  // namespace

std::vector<Complex> HullGrid::points() const {
  std::vector<Complex> pts = CircleGrid(boundary).points;
  for (double r : radii) {
    const CircleGrid ring(boundary, r);
    pts.insert(pts.end(), ring.points.begin(), ring.points.end());
  }
  return pts;
}

CMatrix ConvexCombination::operator()(Complex z) const {
  if (atoms.empty()) throw Error(ErrorKind::InvalidArgument, "empty combination");
  CMatrix acc = CMatrix::Zero(atoms.front().n_out(), atoms.front().n_out());
  for (std::size_t i = 0; i < atoms.size(); ++i) acc += weights[i] * eval_transfer_disc(atoms[i], z);
  return acc;
}

Colligation mobius_compose(const Colligation& g, Complex a) {
  if (!(std::abs(a) < 1.0)) throw Error(ErrorKind::InvalidArgument, "Mobius parameter needs |a| < 1");
  const Index n = g.n_out();
  const double s = std::sqrt(1.0 - std::norm(a));
  const CMatrix m = (CMatrix::Identity(n, n) + std::conj(a) * g.a).inverse();
  return Colligation(a * CMatrix::Identity(n, n) + s * s * g.a * m, s * m * g.b, s * g.c * m,
                     g.d - std::conj(a) * g.c * m * g.b);
}

ConvexCombination scale_average_atoms(const Colligation& g, double s, std::size_t m_atoms) {
  if (!(s > 0.0 && s < 1.0)) throw Error(ErrorKind::InvalidArgument, "scale must lie in (0, 1)");
  if (m_atoms == 0) throw Error(ErrorKind::InvalidArgument, "need at least one atom");
  if (!is_inner_on_circle(as_function(g), CircleGrid(256), kInnerTol).ok) {
    throw Error(ErrorKind::NotInner, "scale averaging needs an inner function");
  }
  ConvexCombination c;
  const CircleGrid roots(m_atoms);
  for (const auto& w : roots.points) {
    c.atoms.push_back(mobius_compose(g, s * w));
    c.weights.push_back(1.0 / static_cast<double>(m_atoms));
  }
  const double sm = std::pow(s, static_cast<double>(m_atoms));
  c.residual = 2.0 * sm / (1.0 - sm);
  return c;
}

ConvexCombination combine_products(const ConvexCombination& left, const ConvexCombination& right) {
  if (left.atoms.empty() || right.atoms.empty()) throw Error(ErrorKind::InvalidArgument, "empty combination");
  if (left.atoms.front().n_out() != right.atoms.front().n_out()) {
    throw Error(ErrorKind::DimensionMismatch, "combinations act on different sizes");
  }
  ConvexCombination c;
  c.grid = left.grid;
  for (std::size_t i = 0; i < left.size(); ++i)
    for (std::size_t j = 0; j < right.size(); ++j) {
      c.weights.push_back(left.weights[i] * right.weights[j]);
      c.atoms.push_back(cascade(left.atoms[i], right.atoms[j]));
    }
  c.residual = left.residual + right.residual;
  c.converged = left.converged && right.converged;
  return c;
}

ConvexCombination unitary_left_multiply(const CMatrix& u, const ConvexCombination& comb) {
  if (u.rows() != u.cols() || !is_unitary(u, 1e-10).ok) throw Error(ErrorKind::NotUnitary, "left factor is not unitary");
  ConvexCombination c = comb;
  for (auto& a : c.atoms) {
    if (a.n_out() != u.rows()) throw Error(ErrorKind::DimensionMismatch, "unitary size differs from atoms");
    a = Colligation(u * a.a, u * a.b, a.c, a.d);
  }
  return c;
}

ConvexCombination constant_average(const CMatrix& k) {
  if (k.rows() != k.cols()) throw Error(ErrorKind::NotSquare, "constant must be square");
  Eigen::JacobiSVD<CMatrix> svd(k, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  if (sv.size() && sv(0) > 1.0 + 1e-12) throw Error(ErrorKind::NotContractive, "constant exceeds norm 1");
  Eigen::VectorXcd plus(sv.size()), minus(sv.size());
  for (Index i = 0; i < sv.size(); ++i) {
    const auto [a, b] = unimodular_split(std::min(sv(i), 1.0));
    plus(i) = a;
    minus(i) = b;
  }
  ConvexCombination c;
  c.atoms = {constant_atom(svd.matrixU() * plus.asDiagonal() * svd.matrixV().adjoint()),
             constant_atom(svd.matrixU() * minus.asDiagonal() * svd.matrixV().adjoint())};
  c.weights = {0.5, 0.5};
  return c;
}

double measure_residual(const ConvexCombination& comb, const DiscFunction& f, const std::vector<Complex>& points) {
  const DiscFunction g = [&comb](Complex z) { return comb(z); };
  return sup_deviation(g, f, points);
}

ConvexCombination fw_decompose(const DiscFunction& target, const std::vector<Colligation>& pool,
                               const FwOptions& options, const HullGrid& grid,
                               const std::optional<ConvexCombination>& warm) {
  const std::vector<Complex> points = grid.points();
  std::vector<Colligation> atoms;
  std::vector<double> w0;
  if (warm) {
    atoms = warm->atoms;
    w0 = warm->weights;
  }
  atoms.insert(atoms.end(), pool.begin(), pool.end());
  if (atoms.empty()) throw Error(ErrorKind::InvalidArgument, "empty atom pool");
  const Index n = atoms.front().n_out();
  for (const auto& a : atoms)
    if (a.n_out() != n) throw Error(ErrorKind::DimensionMismatch, "atom sizes differ");

  ConvexCombination result;
  result.grid = grid;
  if (warm) {
    ConvexCombination w = *warm;
    w.grid = grid;
    w.residual = measure_residual(w, target, points);
    if (w.residual <= options.tau) {
      w.converged = true;
      w.iterations = 0;
      return w;
    }
  }

  const CVector t = flatten_samples(target, points, n);
  const Index k = static_cast<Index>(atoms.size());
  Dictionary dict;
  dict.samples.resize(t.size(), k);
  for (Index j = 0; j < k; ++j) {
    dict.samples.col(j) = flatten_samples(as_function(atoms[static_cast<std::size_t>(j)]), points, n);
    dict.degree.push_back(atoms[static_cast<std::size_t>(j)].n_state());
  }
  const Eigen::MatrixXd gram = (dict.samples.adjoint() * dict.samples).real();
  const Eigen::VectorXd lin = (dict.samples.adjoint() * t).real();
  const double scale = gram.diagonal().maxCoeff();

  Eigen::VectorXd w = Eigen::VectorXd::Zero(k);
  if (warm) {
    for (std::size_t i = 0; i < w0.size(); ++i) w(static_cast<Index>(i)) = w0[i];
    w /= w.sum();
  } else {
    Index best = 0;
    for (Index j = 1; j < k; ++j) {
      const double vj = gram(j, j) - 2.0 * lin(j), vb = gram(best, best) - 2.0 * lin(best);
      if (prefer(vj, dict.degree[static_cast<std::size_t>(j)], vb, dict.degree[static_cast<std::size_t>(best)], scale)) best = j;
    }
    w(best) = 1.0;
  }

  auto line_step = [&](Eigen::VectorXd& x, const Eigen::VectorXd& d, double gmax) {
    const Eigen::VectorXd grad = 2.0 * (gram * x - lin);
    const double slope = grad.dot(d);
    const double curv = d.dot(gram * d);
    if (slope >= 0.0) return 0.0;
    double gamma = curv > 0.0 ? -slope / (2.0 * curv) : gmax;
    gamma = std::clamp(gamma, 0.0, gmax);
    x += gamma * d;
    for (Index j = 0; j < x.size(); ++j)
      if (x(j) < 1e-15) x(j) = 0.0;
    x /= x.sum();
    return gamma;
  };

  Eigen::VectorXd best_w = w;
  double best_res = std::numeric_limits<double>::infinity();
  std::size_t iter = 0;
  for (;; ++iter) {
    const double res = sup_of_flat(dict.samples * w - t, n, points.size());
    if (res < best_res) {
      best_res = res;
      best_w = w;
    }
    if (best_res <= options.tau || iter >= options.budget) break;

    const Eigen::VectorXd grad = 2.0 * (gram * w - lin);
    Index s = 0;
    for (Index j = 1; j < k; ++j)
      if (prefer(grad(j), dict.degree[static_cast<std::size_t>(j)], grad(s), dict.degree[static_cast<std::size_t>(s)], scale)) s = j;
    Index v = -1;
    for (Index j = 0; j < k; ++j)
      if (w(j) > 0.0 && (v < 0 || grad(j) > grad(v))) v = j;
    const double wg = grad.dot(w);
    const double gap_fw = wg - grad(s);
    const double gap_away = grad(v) - wg;
    Eigen::VectorXd d;
    double gmax = 1.0;
    if (gap_fw >= gap_away || w(v) >= 1.0) {
      d = -w;
      d(s) += 1.0;
    } else {
      d = w;
      d(v) -= 1.0;
      gmax = w(v) / (1.0 - w(v));
    }
    line_step(w, d, gmax);

    // corrective pairwise steps on the active set
    for (std::size_t inner = 0; inner < options.inner_steps; ++inner) {
      const Eigen::VectorXd g = 2.0 * (gram * w - lin);
      Index lo = -1, hi = -1;
      for (Index j = 0; j < k; ++j) {
        if (w(j) <= 0.0) continue;
        if (lo < 0 || g(j) < g(lo)) lo = j;
        if (hi < 0 || g(j) > g(hi)) hi = j;
      }
      if (lo < 0 || lo == hi || g(hi) - g(lo) <= 1e-13 * std::max(1.0, scale)) break;
      Eigen::VectorXd pd = Eigen::VectorXd::Zero(k);
      pd(lo) = 1.0;
      pd(hi) = -1.0;
      if (line_step(w, pd, w(hi)) == 0.0) break;
    }
  }

  for (Index j = 0; j < k; ++j)
    if (best_w(j) > 0.0) {
      result.atoms.push_back(atoms[static_cast<std::size_t>(j)]);
      result.weights.push_back(best_w(j));
    }
  double sum = 0.0;
  for (double x : result.weights) sum += x;
  for (double& x : result.weights) x /= sum;
  result.iterations = iter;
  result.residual = measure_residual(result, target, points);
  result.converged = result.residual <= options.tau;
  return result;
}

std::vector<Colligation> default_atom_pool(Index n, std::uint64_t seed, std::size_t random_count) {
  std::vector<Colligation> pool;
  const CircleGrid phases(8);
  for (const auto& ph : phases.points) pool.push_back(constant_atom(ph * CMatrix::Identity(n, n)));
  for (const auto& ph : phases.points) {
    const Colligation z(CMatrix::Zero(n, n), CMatrix::Identity(n, n), ph * CMatrix::Identity(n, n),
                        CMatrix::Zero(n, n));
    pool.push_back(z);
  }
  // each random product comes with its negative so symmetric targets are reachable
  for (std::size_t i = 0; i < random_count; ++i) {
    const Colligation g = product_colligation(random_inner(n, i % 3, seed + i));
    pool.push_back(g);
    pool.push_back(Colligation(-g.a, -g.b, g.c, g.d));
  }
  return pool;
}

ConvexCombination darlington_average(const MatrixPolynomial& q, std::size_t m_atoms) {
  if (m_atoms == 0) throw Error(ErrorKind::InvalidArgument, "need at least one atom");
  const Index n = q.size();
  const Colligation psi = darlington_completion(q);
  const CMatrix a11 = psi.a.topLeftCorner(n, n), a12 = psi.a.topRightCorner(n, n);
  const CMatrix a21 = psi.a.bottomLeftCorner(n, n), a22 = psi.a.bottomRightCorner(n, n);
  const CMatrix b1 = psi.b.topRows(n), b2 = psi.b.bottomRows(n);
  const CMatrix c1 = psi.c.leftCols(n), c2 = psi.c.rightCols(n);

  ConvexCombination c;
  for (const auto& omega : CircleGrid(m_atoms).points) {
    // close the second channel with the unimodular constant omega
    const CMatrix k = omega * (CMatrix::Identity(n, n) - omega * a22).inverse();
    c.atoms.emplace_back(a11 + a12 * k * a21, b1 + a12 * k * b2, c1 + c2 * k * a21, psi.d + c2 * k * b2);
    c.weights.push_back(1.0 / static_cast<double>(m_atoms));
  }
  const DiscFunction w22 = [&psi, n](Complex z) { return CMatrix(eval_transfer_disc(psi, z).bottomRightCorner(n, n)); };
  const double wn = std::min(sup_norm_estimate(w22, CircleGrid(1024)).value, 1.0 - 1e-15);
  const double wm = std::pow(wn, static_cast<double>(m_atoms));
  c.residual = std::pow(wn, static_cast<double>(m_atoms) - 1.0) / (1.0 - wm);
  return c;
}

FisherReport fisher_pipeline(const ScaledProduct& f, double eps, std::size_t budget) {
  if (!(eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "eps must be positive");
  f.product.validate();
  if (std::abs(f.scale) > 1.0 + 1e-12) throw Error(ErrorKind::NotContractive, "|scale| exceeds 1");
  const Index n = f.product.size();
  const HullGrid grid;
  const std::vector<Complex> points = grid.points();
  const DiscFunction fn = [f](Complex z) { return CMatrix(f.scale * eval_bp_product(f.product, z)); };

  FisherReport report;
  const Colligation whole = product_colligation(f.product);
  if (std::abs(std::abs(f.scale) - 1.0) <= 1e-12) {
    const Complex u = f.scale / std::abs(f.scale);
    report.combination = single(Colligation(u * whole.a, u * whole.b, whole.c, whole.d));
    report.combination.grid = grid;
    report.combination.residual = measure_residual(report.combination, fn, points);
    return report;
  }

  const double r = radial_bisection(fn, eps / 3.0, points);
  report.r = r;
  report.radial_error = sup_deviation(fn, radial_scale(fn, r), points);

  // b_alpha(r z) = c0 + rho phi(z) with phi a disc automorphism
  ConvexCombination acc = single(constant_atom(CMatrix::Identity(n, n)));
  for (const auto& fac : f.product.factors) {
    const Complex alpha = fac.alpha;
    const double a2 = std::norm(alpha);
    const double den = 1.0 - r * r * a2;
    const Complex c0 = -(1.0 - r * r) * alpha / den;
    const double rho = r * (1.0 - a2) / den;
    const CMatrix& p = fac.proj;
    const CMatrix rest = CMatrix::Identity(n, n) - p;

    ConvexCombination piece;
    if (rho > 1e-14) {
      const Complex beta = eval_blaschke(-alpha, c0) / r;
      const Complex phi1 = (eval_blaschke(alpha, r) - c0) / rho;
      const Complex lambda = phi1 / eval_blaschke(beta, 1.0);
      BlaschkePotapovProduct atom{lambda * p + rest, {{beta, p}}};
      piece.atoms.push_back(product_colligation(atom));
      piece.weights.push_back(rho);
    }
    if (rho < 1.0 - 1e-15) {
      const auto [u1, u2] = unimodular_split(c0 / (1.0 - rho));
      for (Complex u : {u1, u2}) {
        piece.atoms.push_back(constant_atom(u * p + rest));
        piece.weights.push_back(0.5 * (1.0 - rho));
      }
    }
    acc = combine_products(acc, piece);
  }
  acc = unitary_left_multiply(f.product.unitary, acc);
  acc = combine_products(constant_average(f.scale * CMatrix::Identity(n, n)), acc);
  acc.grid = grid;
  acc.residual = measure_residual(acc, fn, points);

  FwOptions opt;
  opt.budget = budget;
  opt.tau = eps;
  report.combination = fw_decompose(fn, default_atom_pool(n, 1), opt, grid, acc);
  return report;
}

FisherReport fisher_pipeline(const MatrixPolynomial& f, double eps, std::size_t budget) {
  if (!(eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "eps must be positive");
  const Index n = f.size();
  const HullGrid grid;
  const std::vector<Complex> points = grid.points();
  const DiscFunction fn = as_function(f);
  const double sup = sup_norm_estimate(fn, CircleGrid(4096)).value;
  if (sup > 1.0 + 1e-9) throw Error(ErrorKind::NotContractive, "sampled sup norm " + std::to_string(sup));

  FisherReport report;
  FwOptions opt;
  opt.budget = budget;
  opt.tau = eps;

  if (f.degree() == 0) {
    const CMatrix& k = f.coeffs[0];
    report.combination = is_unitary(k, 1e-12).ok ? single(constant_atom(k)) : constant_average(k);
    report.combination.grid = grid;
    report.combination.residual = measure_residual(report.combination, fn, points);
    return report;
  }
  if (is_inner_on_circle(fn, CircleGrid(1024), kInnerTol).ok) {
    report.combination = single(contractive_realization(f));
    report.combination.grid = grid;
    report.combination.residual = measure_residual(report.combination, fn, points);
    return report;
  }

  const double r = radial_bisection(fn, eps / 3.0, points);
  report.r = r;
  report.radial_error = sup_deviation(fn, radial_scale(fn, r), points);

  std::vector<CMatrix> coeffs = f.coeffs;
  for (std::size_t k = 0; k < coeffs.size(); ++k) coeffs[k] *= std::pow(r, static_cast<double>(k));
  MatrixPolynomial q(coeffs);
  const double qsup = sup_norm_estimate(as_function(q), CircleGrid(4096)).value;
  const double shrink = qsup > 0.0 ? std::min(1.0, (1.0 - eps / 3.0) / qsup) : 1.0;
  for (auto& c : q.coeffs) c *= shrink;

  // atoms needed for the aliasing tail w^{M-1}/(1-w^M) to drop below eps/3
  const double w = std::min(qsup * shrink + 1e-9, 1.0 - 1e-12);
  std::size_t m = 1;
  while (m < 4096 && std::pow(w, static_cast<double>(m) - 1.0) / (1.0 - std::pow(w, static_cast<double>(m))) > eps / 3.0) ++m;

  ConvexCombination acc = darlington_average(q, m);
  acc.grid = grid;
  report.combination = fw_decompose(fn, default_atom_pool(n, 1), opt, grid, acc);
  return report;
}

}  // namespace innerapprox

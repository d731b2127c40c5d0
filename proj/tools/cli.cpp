#include "cli.hpp"

#include "innerapprox/dilation.hpp"
#include "innerapprox/domains.hpp"
#include "innerapprox/hull.hpp"
#include "innerapprox/indefinite.hpp"
#include "innerapprox/io.hpp"
#include "innerapprox/pipeline.hpp"
#include "innerapprox/potapov.hpp"
#include "innerapprox/realization.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <sstream>

namespace innerapprox::cli {

namespace {

using io::Json;

constexpr int kMinDepth = 3;
constexpr int kMaxDepth = 256;

[[noreturn]] void bad_flag(const std::string& what) { throw Error(ErrorKind::ParseError, what); }

// Writes to path when given, otherwise to the output stream.
void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty()) {
    out << content;
  } else {
    io::write_atomic(path, content);
  }
}

Colligation to_colligation(const io::FunctionFile& f) {
  if (const auto* p = std::get_if<MatrixPolynomial>(&f)) return contractive_realization(*p);
  if (const auto* c = std::get_if<Colligation>(&f)) return *c;
  const auto& sp = std::get<ScaledProduct>(f);
  const Colligation c = product_colligation(sp.product);
  return Colligation(sp.scale * c.a, sp.scale * c.b, c.c, c.d);
}

io::FunctionFile load_function(const std::string& path) { return io::function_from_json(io::read_json(path)); }

Colligation load_colligation(const std::string& path) { return io::colligation_from_json(io::read_json(path)); }

double max_region_norm(const std::function<double(Complex)>& g, const std::vector<Complex>& pts) {
  double best = 0.0;
  for (const auto& z : pts) best = std::max(best, g(z));
  return best;
}

// Flags shared by the report verbs.
struct DepthFlags {
  std::string depths = "8";
  double rho = 0.8;
  std::size_t grid = 256;
  std::string report;
};

void add_depth_flags(CLI::App* cmd, DepthFlags& f, double rho_default, std::size_t grid_default) {
  f.rho = rho_default;
  f.grid = grid_default;
  cmd->add_option("--m", f.depths, "depth or range a..b (3..256)")->capture_default_str();
  cmd->add_option("--rho", f.rho, "radius of the comparison circle")->check(CLI::Range(1e-6, 1.0 - 1e-6))->capture_default_str();
  cmd->add_option("--grid", f.grid, "points per circle")->check(CLI::Range(8, 65536))->capture_default_str();
  cmd->add_option("--report", f.report, "CSV output path (stdout when omitted)");
}

}  // namespace

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError:
    case ErrorKind::InvalidArgument:
    case ErrorKind::DepthTooSmall:
    case ErrorKind::IndexOutOfRange:
    case ErrorKind::InvalidRadius:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::NotSquare:
      return kExitParse;
    case ErrorKind::NotContractive:
    case ErrorKind::NotContractiveInput:
    case ErrorKind::NotInner:
    case ErrorKind::NotUnitary:
    case ErrorKind::InvariantViolation:
      return kExitInvariant;
    case ErrorKind::SingularResolvent:
    case ErrorKind::DegenerateDenominator:
    case ErrorKind::PoleHit:
    case ErrorKind::SingularBlock:
    case ErrorKind::CornerDegenerate:
    case ErrorKind::BudgetExhausted:
      return kExitNumerical;
  }
  return kExitNumerical;
}

std::vector<int> parse_depths(const std::string& text) {
  auto to_int = [&](const std::string& s) {
    int v = 0;
    std::size_t used = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      bad_flag("--m expects an integer or a..b, got '" + text + "'");
    }
    if (used != s.size()) bad_flag("--m expects an integer or a..b, got '" + text + "'");
    if (v < kMinDepth || v > kMaxDepth) bad_flag("--m values must lie in 3..256");
    return v;
  };
  const auto dots = text.find("..");
  if (dots == std::string::npos) return {to_int(text)};
  const int lo = to_int(text.substr(0, dots)), hi = to_int(text.substr(dots + 2));
  if (lo > hi) bad_flag("--m range must be increasing");
  std::vector<int> out;
  for (int m = lo; m <= hi; ++m) out.push_back(m);
  return out;
}

Complex parse_complex(const std::string& text) {
  std::istringstream in(text);
  in.imbue(std::locale::classic());
  double re = 0.0, im = 0.0;
  char comma = 0;
  if (!(in >> re)) bad_flag("expected re,im but got '" + text + "'");
  if (in >> comma) {
    if (comma != ',' || !(in >> im)) bad_flag("expected re,im but got '" + text + "'");
  }
  std::string rest;
  if (in >> rest) bad_flag("trailing text in '" + text + "'");
  return {re, im};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rational inner approximation of matrix Schur functions", "innerapprox"};
  app.require_subcommand(1);
  std::function<int()> action;

  // realize
  std::string poly_path, out_path;
  std::size_t samples = 0;
  double rank_tol = 1e-10;
  auto* realize = app.add_subcommand("realize", "contractive colligation of a polynomial");
  realize->add_option("--poly", poly_path, "polynomial JSON")->required();
  realize->add_option("--out", out_path, "colligation JSON output");
  realize->add_option("--samples", samples, "sample count (0 = automatic)")->check(CLI::Range(0, 100000));
  realize->add_option("--rank-tol", rank_tol, "numerical rank tolerance")->check(CLI::PositiveNumber);
  realize->callback([&] {
    action = [&] {
      const MatrixPolynomial p = io::polynomial_from_json(io::read_json(poly_path));
      const RealizationReport rep = contractive_realization_report(p, samples, rank_tol);
      if (!is_contraction(rep.col.system_matrix(), 1e-9).ok) {
        throw Error(ErrorKind::InvariantViolation, "realized system matrix is not contractive");
      }
      emit(out_path, io::dump(io::to_json(rep.col)), out);
      return kExitOk;
    };
  });

  // dilate
  std::string col_path;
  int depth = 8;
  auto* dilate = app.add_subcommand("dilate", "unitary dilation U_m of a contractive colligation");
  dilate->add_option("--col", col_path, "colligation JSON")->required();
  dilate->add_option("--m", depth, "depth")->check(CLI::Range(kMinDepth, kMaxDepth));
  dilate->add_option("--out", out_path, "dilated colligation JSON output");
  dilate->callback([&] {
    action = [&] {
      const DilatedColligation dil = unitary_dilation(load_colligation(col_path), depth);
      const MatrixCheck u = is_unitary(dil.unitary(), 1e-10);
      if (!u.ok) throw Error(ErrorKind::InvariantViolation, "U_m unitarity defect " + std::to_string(u.defect));
      Json j = io::to_json(dil.colligation());
      j["m"] = dil.m;
      emit(out_path, io::dump(j), out);
      return kExitOk;
    };
  });

  // approx-disc
  DepthFlags disc_flags;
  auto* approx_disc = app.add_subcommand("approx-disc", "convergence report of the disc inner approximants");
  approx_disc->add_option("--col", col_path, "colligation JSON")->required();
  add_depth_flags(approx_disc, disc_flags, 0.8, 256);
  approx_disc->callback([&] {
    action = [&] {
      const std::vector<int> ms = parse_depths(disc_flags.depths);
      const ConvergenceReport rep =
          convergence_report_disc(load_colligation(col_path), ms, disc_flags.rho, disc_flags.grid);
      io::CsvTable t{{"m", "rho", "grid_error", "tail_bound", "unitarity_defect"}, {}};
      for (const auto& r : rep.rows) t.rows.push_back({double(r.m), r.rho, r.grid_error, r.tail_bound, r.unitarity_defect});
      emit(disc_flags.report, t.str(), out);
      return kExitOk;
    };
  });

  // approx-bidisc
  DepthFlags bidisc_flags;
  Index d1 = 0, d2 = 0;
  auto* approx_bidisc = app.add_subcommand("approx-bidisc", "convergence report of the bidisc inner approximants");
  approx_bidisc->add_option("--col", col_path, "colligation JSON")->required();
  approx_bidisc->add_option("--d1", d1, "state coordinates attached to z1")->required()->check(CLI::NonNegativeNumber);
  approx_bidisc->add_option("--d2", d2, "state coordinates attached to z2")->required()->check(CLI::NonNegativeNumber);
  add_depth_flags(approx_bidisc, bidisc_flags, 0.8, 64);
  approx_bidisc->callback([&] {
    action = [&] {
      const std::vector<int> ms = parse_depths(bidisc_flags.depths);
      const Colligation col = load_colligation(col_path);
      if (d1 + d2 != col.n_state()) bad_flag("--d1 + --d2 must equal the state dimension");
      const ConvergenceReport rep =
          convergence_report_bidisc(col, BidiscSplit{d1, d2}, ms, bidisc_flags.rho, bidisc_flags.grid);
      io::CsvTable t{{"m", "rho", "grid_error", "tail_bound", "unitarity_defect"}, {}};
      for (const auto& r : rep.rows) t.rows.push_back({double(r.m), r.rho, r.grid_error, r.tail_bound, r.unitarity_defect});
      emit(bidisc_flags.report, t.str(), out);
      return kExitOk;
    };
  });

  // check-inner
  std::string fn_path;
  std::size_t grid = 256;
  double tol = 1e-8;
  auto* check_inner = app.add_subcommand("check-inner", "sampled unitarity of boundary values");
  check_inner->add_option("--fn", fn_path, "product, colligation or polynomial JSON")->required();
  check_inner->add_option("--grid", grid, "circle points")->check(CLI::Range(8, 65536));
  check_inner->add_option("--tol", tol, "tolerance")->check(CLI::PositiveNumber);
  check_inner->callback([&] {
    action = [&] {
      const InnerCheck c = is_inner_on_circle(io::as_function(load_function(fn_path)), CircleGrid(grid), tol);
      const Json j{{"inner", c.ok}, {"defect", c.defect}, {"grid", grid}, {"tol", tol}};
      out << io::dump(j);
      return kExitOk;
    };
  });

  // random-inner
  Index n_size = 2;
  std::size_t n_factors = 4;
  std::optional<std::uint64_t> seed;
  auto* rnd = app.add_subcommand("random-inner", "seeded random Blaschke-Potapov product");
  rnd->add_option("--n", n_size, "matrix size")->check(CLI::Range(1, 64));
  rnd->add_option("--m", n_factors, "number of factors")->check(CLI::Range(0, 256));
  rnd->add_option("--seed", seed, "generator seed (mt19937_64)")->required();
  rnd->add_option("--out", out_path, "product JSON output");
  rnd->callback([&] {
    action = [&] {
      emit(out_path, io::dump(io::to_json(random_inner(n_size, n_factors, *seed))), out);
      return kExitOk;
    };
  });

  // fisher
  double eps = 0.1;
  std::size_t budget = 256;
  auto* fisher = app.add_subcommand("fisher", "convex combination of inner functions near a Schur function");
  fisher->add_option("--fn", fn_path, "polynomial or (scaled) product JSON")->required();
  fisher->add_option("--eps", eps, "target sup residual")->check(CLI::Range(1e-6, 1.0));
  fisher->add_option("--budget", budget, "iteration budget")->check(CLI::Range(1, 100000));
  fisher->add_option("--out", out_path, "combination JSON output");
  fisher->callback([&] {
    action = [&] {
      const io::FunctionFile f = load_function(fn_path);
      FisherReport rep;
      if (const auto* p = std::get_if<MatrixPolynomial>(&f)) {
        rep = fisher_pipeline(*p, eps, budget);
      } else if (const auto* s = std::get_if<ScaledProduct>(&f)) {
        rep = fisher_pipeline(*s, eps, budget);
      } else {
        bad_flag("fisher accepts polynomial or product files");
      }
      const double total = std::accumulate(rep.combination.weights.begin(), rep.combination.weights.end(), 0.0);
      if (std::abs(total - 1.0) > 1e-12) throw Error(ErrorKind::InvariantViolation, "weights do not sum to 1");
      Json j = io::to_json(rep.combination);
      j["r"] = rep.r;
      emit(out_path, io::dump(j), out);
      return kExitOk;
    };
  });

  // pg
  Index sig_p = 1, sig_q = 1;
  std::string mode = "forward";
  std::size_t pairs = 10, points = 16;
  double radius = 0.5;
  auto* pg = app.add_subcommand("pg", "Potapov-Ginzburg transform");
  pg->add_option("--fn", fn_path, "function JSON")->required();
  pg->add_option("--p", sig_p, "positive signature count")->check(CLI::Range(1, 64));
  pg->add_option("--q", sig_q, "negative signature count")->check(CLI::Range(1, 64));
  pg->add_option("--mode", mode, "forward | inverse | verify")->check(CLI::IsMember({"forward", "inverse", "verify"}));
  pg->add_option("--pairs", pairs, "point pairs for verify")->check(CLI::Range(1, 100000));
  pg->add_option("--seed", seed, "generator seed for verify");
  pg->add_option("--points", points, "evaluation points for forward/inverse")->check(CLI::Range(1, 100000));
  pg->add_option("--radius", radius, "radius of the evaluation circle")->check(CLI::Range(0.0, 1.0));
  pg->add_option("--out", out_path, "JSON output");
  pg->callback([&] {
    action = [&] {
      const SignatureSpace sig(sig_p, sig_q);
      const io::FunctionFile file = load_function(fn_path);
      if (io::size_of(file) != sig.size()) bad_flag("function size differs from p + q");
      const DiscFunction f = io::as_function(file);
      if (mode == "verify") {
        if (!seed) bad_flag("--seed is required for --mode verify");
        Rng rng(*seed);
        double kernel = 0.0, round = 0.0, forms = 0.0;
        for (std::size_t i = 0; i < pairs; ++i) {
          const Complex z = random_disc_point(rng, 0.95), w = random_disc_point(rng, 0.95);
          kernel = std::max(kernel, verify_pg_kernel_identity(f, sig, z, w).max());
          for (const Complex x : {z, w}) {
            const CMatrix fx = f(x);
            round = std::max(round, operator_norm(pg_inverse(pg_transform(fx, sig), sig) - fx));
            const PgFormDefects d = pg_form_defects(fx, sig);
            forms = std::max({forms, d.forward, d.inverse});
          }
        }
        const Json j{{"pairs", pairs}, {"kernel_defect", kernel}, {"roundtrip_defect", round}, {"form_defect", forms}};
        emit(out_path, io::dump(j), out);
        if (kernel > 1e-9 || round > 1e-10 || forms > 1e-10) {
          throw Error(ErrorKind::InvariantViolation, "transform identities fail beyond tolerance");
        }
        return kExitOk;
      }
      Json rows = Json::array();
      for (const auto& z : CircleGrid(points, radius).points) {
        const CMatrix v = mode == "forward" ? pg_transform(f(z), sig) : pg_inverse(f(z), sig);
        rows.push_back(Json{{"z", io::to_json(z)}, {"value", io::to_json(v)}});
      }
      emit(out_path, io::dump(rows), out);
      return kExitOk;
    };
  });

  // j-approx
  DepthFlags j_flags;
  std::size_t degree = 16;
  std::string input_form = "f";
  auto* japprox = app.add_subcommand("j-approx", "rational J0-inner approximants of a J0-contractive function");
  japprox->add_option("--fn", fn_path, "function JSON")->required();
  japprox->add_option("--p", sig_p, "positive signature count")->check(CLI::Range(1, 64));
  japprox->add_option("--q", sig_q, "negative signature count")->check(CLI::Range(1, 64));
  japprox->add_option("--degree", degree, "Taylor truncation degree")->check(CLI::Range(0, 512));
  japprox->add_option("--input", input_form, "f: file holds F; sigma: file holds its transform")
      ->check(CLI::IsMember({"f", "sigma"}));
  add_depth_flags(japprox, j_flags, 0.7, 256);
  japprox->callback([&] {
    action = [&] {
      const SignatureSpace sig(sig_p, sig_q);
      const std::vector<int> ms = parse_depths(j_flags.depths);
      const io::FunctionFile file = load_function(fn_path);
      if (io::size_of(file) != sig.size()) bad_flag("function size differs from p + q");
      const DiscFunction f = input_form == "f" ? io::as_function(file) : pg_inverse(io::as_function(file), sig);
      const CircleGrid ring(j_flags.grid, j_flags.rho, 0.5 / static_cast<double>(j_flags.grid));
      const CircleGrid circle(j_flags.grid, 1.0, 0.5 / static_cast<double>(j_flags.grid));
      io::CsvTable t{{"m", "m_used", "rho", "grid_error", "j_unitarity_defect", "gated_points"}, {}};
      for (int m : ms) {
        const JInnerApproximant ap = j_inner_approximate(f, sig, m, degree);
        double e = 0.0, defect = 0.0;
        std::size_t used = 0;
        for (const auto& z : ring.points) e = std::max(e, operator_norm(ap.f_m(z) - f(z)));
        for (const auto& z : circle.points) {
          const CMatrix b = ap.b_m(z);
          if (corner_condition(b, sig) > kBoundaryConditionGate) continue;
          ++used;
          defect = std::max(defect, j_unitarity_defect(pg_inverse(b, sig), sig));
        }
        if (defect > 1e-6) throw Error(ErrorKind::InvariantViolation, "F_m is not J0-unitary on the gated circle");
        t.rows.push_back({double(m), double(ap.m), j_flags.rho, e, defect, double(used)});
      }
      emit(j_flags.report, t.str(), out);
      return kExitOk;
    };
  });

  // kl-approx
  DepthFlags kl_flags;
  std::string b_path, l_path, kl_mode = "compact";
  auto* kl = app.add_subcommand("kl-approx", "approximants B^{-1} L_m of a Krein-Langer pair");
  kl->add_option("--b", b_path, "Blaschke-Potapov product JSON")->required();
  kl->add_option("--l", l_path, "contractive polynomial JSON")->required();
  kl->add_option("--mode", kl_mode, "compact | circle")->check(CLI::IsMember({"compact", "circle"}));
  kl->add_option("--eps", eps, "hull residual target (circle mode)")->check(CLI::Range(1e-6, 1.0));
  add_depth_flags(kl, kl_flags, 0.9, 256);
  kl->callback([&] {
    action = [&] {
      const ScaledProduct b = io::product_from_json(io::read_json(b_path));
      if (b.scale != Complex(1.0)) bad_flag("B must be unscaled");
      const KreinLangerPair pair{b.product, io::polynomial_from_json(io::read_json(l_path))};
      pair.validate();
      const DiscFunction l = as_function(pair.l);
      auto exact = [&](Complex z) { return CMatrix(bp_inverse(pair.b, z) * l(z)); };
      auto binv_norm = [&](Complex z) { return operator_norm(bp_inverse(pair.b, z)); };
      if (kl_mode == "circle") {
        const KreinLangerApproximant ap = krein_langer_approximate(pair, kMinDepth, KreinLangerMode::Circle, eps);
        const std::vector<Complex> pts = CircleGrid(512).points;
        double e = 0.0;
        for (const auto& z : pts) e = std::max(e, operator_norm(ap.f_m(z) - exact(z)));
        const double bound = max_region_norm(binv_norm, pts) * ap.hull_residual;
        if (e > bound + 1e-12) throw Error(ErrorKind::InvariantViolation, "boundary error exceeds ||B^{-1}|| * residual");
        io::CsvTable t{{"eps", "atoms", "hull_residual", "boundary_error", "bound"}, {}};
        t.rows.push_back({eps, double(ap.atoms), ap.hull_residual, e, bound});
        emit(kl_flags.report, t.str(), out);
        return kExitOk;
      }
      const std::vector<int> ms = parse_depths(kl_flags.depths);
      std::vector<Complex> region;
      for (int k = 1; k <= 9; ++k) {
        for (const auto& z : CircleGrid(kl_flags.grid, kl_flags.rho * k / 9.0, 0.5 / kl_flags.grid).points) {
          bool near = false;
          for (const auto& f : pair.b.factors) near = near || std::abs(z - f.alpha) < 0.1;
          if (!near) region.push_back(z);
        }
      }
      const double binv = max_region_norm(binv_norm, region);
      io::CsvTable t{{"m", "rho", "grid_error", "bound"}, {}};
      for (int m : ms) {
        const KreinLangerApproximant ap = krein_langer_approximate(pair, m);
        double e = 0.0;
        for (const auto& z : region) e = std::max(e, operator_norm(ap.f_m(z) - exact(z)));
        const double bound = binv * tail_bound(kl_flags.rho, m).bound;
        if (e > bound + 1e-12) throw Error(ErrorKind::InvariantViolation, "region error exceeds ||B^{-1}|| * tail");
        t.rows.push_back({double(m), kl_flags.rho, e, bound});
      }
      emit(kl_flags.report, t.str(), out);
      return kExitOk;
    };
  });

  // gamma-approx / tetra-approx
  DepthFlags g_flags, t_flags;
  auto domain_action = [&](const DepthFlags& flags, bool gamma) {
    const Colligation col = to_colligation(load_function(fn_path));
    const std::vector<int> ms = parse_depths(flags.depths);
    io::CsvTable t;
    t.header = gamma ? std::vector<std::string>{"m", "rho", "boundary_defect", "s_error", "s_bound", "p_error", "p_bound"}
                     : std::vector<std::string>{"m",        "rho",      "boundary_defect", "x1_error", "x1_bound",
                                                "x2_error", "x2_bound", "x3_error",        "x3_bound"};
    for (int m : ms) {
      const DomainReport rep = gamma ? gamma_report(col, m, flags.rho, flags.grid) : tetra_report(col, m, flags.rho, flags.grid);
      if (!rep.boundary_ok) throw Error(ErrorKind::InvariantViolation, "approximant leaves the distinguished boundary");
      std::vector<double> row{double(m), flags.rho, rep.boundary_defect};
      for (std::size_t k = 0; k < rep.component_error.size(); ++k) {
        if (rep.component_error[k] > rep.component_bound[k] + 1e-12) {
          throw Error(ErrorKind::InvariantViolation, "component error exceeds its bound");
        }
        row.push_back(rep.component_error[k]);
        row.push_back(rep.component_bound[k]);
      }
      t.rows.push_back(row);
    }
    emit(flags.report, t.str(), out);
    return kExitOk;
  };
  auto* gamma_approx = app.add_subcommand("gamma-approx", "(tr F_m, det F_m) approximants in the symmetrized bidisc");
  gamma_approx->add_option("--fn", fn_path, "2 x 2 polynomial or colligation JSON")->required();
  add_depth_flags(gamma_approx, g_flags, 0.7, 256);
  gamma_approx->callback([&] { action = [&] { return domain_action(g_flags, true); }; });
  auto* tetra_approx = app.add_subcommand("tetra-approx", "(F11, F22, det F) approximants in the tetrablock");
  tetra_approx->add_option("--fn", fn_path, "2 x 2 polynomial or colligation JSON")->required();
  add_depth_flags(tetra_approx, t_flags, 0.7, 256);
  tetra_approx->callback([&] { action = [&] { return domain_action(t_flags, false); }; });

  // gamma-check / tetra-check
  std::string s_text, p_text, x1_text, x2_text, x3_text;
  bool boundary = false, open = false;
  double mtol = 1e-10;
  auto* gamma_check = app.add_subcommand("gamma-check", "membership in the symmetrized bidisc");
  gamma_check->add_option("--s", s_text, "re,im")->required();
  gamma_check->add_option("--p", p_text, "re,im")->required();
  gamma_check->add_flag("--boundary", boundary, "test the distinguished boundary");
  gamma_check->add_flag("--open", open, "test the open domain");
  gamma_check->add_option("--tol", mtol, "tolerance")->check(CLI::NonNegativeNumber);
  gamma_check->callback([&] {
    action = [&] {
      const GammaPoint g{parse_complex(s_text), parse_complex(p_text)};
      const bool member = boundary ? on_bgamma(g, mtol) : in_gamma(g, !open, mtol);
      out << io::dump(Json{{"member", member}, {"set", boundary ? "bGamma" : (open ? "G" : "Gamma")}});
      return kExitOk;
    };
  });
  auto* tetra_check = app.add_subcommand("tetra-check", "membership in the tetrablock");
  tetra_check->add_option("--x1", x1_text, "re,im")->required();
  tetra_check->add_option("--x2", x2_text, "re,im")->required();
  tetra_check->add_option("--x3", x3_text, "re,im")->required();
  tetra_check->add_flag("--boundary", boundary, "test the distinguished boundary");
  tetra_check->add_flag("--open", open, "test the open domain");
  tetra_check->add_option("--tol", mtol, "tolerance")->check(CLI::NonNegativeNumber);
  tetra_check->callback([&] {
    action = [&] {
      const TetraPoint x{parse_complex(x1_text), parse_complex(x2_text), parse_complex(x3_text)};
      const bool member = boundary ? on_btetra(x, mtol) : in_tetra(x, !open, mtol);
      out << io::dump(Json{{"member", member}, {"set", boundary ? "bE" : (open ? "E" : "closure E")}});
      return kExitOk;
    };
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitParse;
  }
  try {
    return action();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace innerapprox::cli

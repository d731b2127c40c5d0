#include "innerapprox/io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

namespace innerapprox::io {

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorKind::ParseError, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) parse_fail(std::string("expected an object holding \"") + key + "\"");
  const auto it = j.find(key);
  if (it == j.end()) parse_fail(std::string("missing key \"") + key + "\"");
  return *it;
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) parse_fail(std::string(what) + " must be a number");
  return j.get<double>();
}

Index count(const Json& j, const char* what) {
  if (!j.is_number_integer() || j.get<long long>() < 0) parse_fail(std::string(what) + " must be a count");
  return static_cast<Index>(j.get<long long>());
}

}  // namespace

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const CMatrix& m) {
  Json data = Json::array();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index k = 0; k < m.cols(); ++k) data.push_back(to_json(m(i, k)));
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Json to_json(const Colligation& col) {
  return Json{{"N", col.n_out()}, {"d", col.n_state()}, {"A", to_json(col.a)},
              {"B", to_json(col.b)},  {"C", to_json(col.c)},  {"D", to_json(col.d)}};
}

Json to_json(const MatrixPolynomial& p) {
  Json coeffs = Json::array();
  for (const auto& c : p.coeffs) coeffs.push_back(to_json(c));
  return Json{{"N", p.size()}, {"coeffs", std::move(coeffs)}};
}

Json to_json(const BlaschkePotapovProduct& prod, Complex scale) {
  Json factors = Json::array();
  for (const auto& f : prod.factors) factors.push_back(Json{{"alpha", to_json(f.alpha)}, {"P", to_json(f.proj)}});
  Json out{{"N", prod.size()}, {"U", to_json(prod.unitary)}, {"factors", std::move(factors)}};
  if (scale != Complex(1.0)) out["scale"] = to_json(scale);
  return out;
}

Json to_json(const ConvexCombination& comb) {
  Json atoms = Json::array();
  for (const auto& a : comb.atoms) atoms.push_back(to_json(a));
  return Json{{"weights", comb.weights},
              {"atoms", std::move(atoms)},
              {"residual", comb.residual},
              {"converged", comb.converged},
              {"iterations", comb.iterations},
              {"grid", Json{{"boundary", comb.grid.boundary}, {"radii", comb.grid.radii}}}};
}

Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) parse_fail("complex scalar must be [re, im]");
  return {number(j[0], "real part"), number(j[1], "imaginary part")};
}

CMatrix matrix_from_json(const Json& j) {
  const Index rows = count(field(j, "rows"), "rows");
  const Index cols = count(field(j, "cols"), "cols");
  const Json& data = field(j, "data");
  if (!data.is_array() || static_cast<Index>(data.size()) != rows * cols) parse_fail("matrix data length != rows * cols");
  CMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index k = 0; k < cols; ++k) m(i, k) = complex_from_json(data[static_cast<std::size_t>(i * cols + k)]);
  return m;
}

Colligation colligation_from_json(const Json& j) {
  const Index n = count(field(j, "N"), "N");
  const Index d = count(field(j, "d"), "d");
  Colligation col(matrix_from_json(field(j, "A")), matrix_from_json(field(j, "B")), matrix_from_json(field(j, "C")),
                  matrix_from_json(field(j, "D")));
  if (col.n_out() != n || col.n_state() != d) parse_fail("declared N or d differs from the blocks");
  return col;
}

MatrixPolynomial polynomial_from_json(const Json& j) {
  const Index n = count(field(j, "N"), "N");
  const Json& coeffs = field(j, "coeffs");
  if (!coeffs.is_array() || coeffs.empty()) parse_fail("coeffs must be a non-empty array");
  std::vector<CMatrix> c;
  for (const auto& m : coeffs) c.push_back(matrix_from_json(m));
  MatrixPolynomial p(std::move(c));
  if (p.size() != n) parse_fail("declared N differs from the coefficients");
  return p;
}

ScaledProduct product_from_json(const Json& j) {
  const Index n = count(field(j, "N"), "N");
  ScaledProduct out;
  out.product.unitary = matrix_from_json(field(j, "U"));
  const Json& factors = field(j, "factors");
  if (!factors.is_array()) parse_fail("factors must be an array");
  for (const auto& f : factors) {
    out.product.factors.push_back({complex_from_json(field(f, "alpha")), matrix_from_json(field(f, "P"))});
  }
  if (j.contains("scale")) out.scale = complex_from_json(j["scale"]);
  if (out.product.size() != n) parse_fail("declared N differs from U");
  out.product.validate();
  return out;
}

ConvexCombination combination_from_json(const Json& j) {
  ConvexCombination c;
  const Json& w = field(j, "weights");
  const Json& atoms = field(j, "atoms");
  if (!w.is_array() || !atoms.is_array() || w.size() != atoms.size()) parse_fail("weights and atoms differ in length");
  for (const auto& x : w) c.weights.push_back(number(x, "weight"));
  for (const auto& a : atoms) c.atoms.push_back(colligation_from_json(a));
  c.residual = number(field(j, "residual"), "residual");
  if (j.contains("converged")) c.converged = j["converged"].get<bool>();
  if (j.contains("iterations")) c.iterations = static_cast<std::size_t>(count(j["iterations"], "iterations"));
  if (j.contains("grid")) {
    const Json& g = j["grid"];
    c.grid.boundary = static_cast<std::size_t>(count(field(g, "boundary"), "boundary"));
    c.grid.radii.clear();
    for (const auto& r : field(g, "radii")) c.grid.radii.push_back(number(r, "radius"));
  }
  return c;
}

FunctionFile function_from_json(const Json& j) {
  if (!j.is_object()) parse_fail("function file must be an object");
  if (j.contains("coeffs")) return polynomial_from_json(j);
  if (j.contains("A")) return colligation_from_json(j);
  if (j.contains("factors")) return product_from_json(j);
  parse_fail("function file is neither polynomial, colligation nor product");
}

DiscFunction as_function(const FunctionFile& f) {
  return std::visit(
      [](const auto& v) -> DiscFunction {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ScaledProduct>) {
          return [v](Complex z) { return CMatrix(v.scale * eval_bp_product(v.product, z)); };
        } else {
          return innerapprox::as_function(v);
        }
      },
      f);
}

Index size_of(const FunctionFile& f) {
  return std::visit(
      [](const auto& v) -> Index {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ScaledProduct>) {
          return v.product.size();
        } else if constexpr (std::is_same_v<T, Colligation>) {
          return v.n_out();
        } else {
          return v.size();
        }
      },
      f);
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) parse_fail("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    parse_fail(path + ": " + e.what());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error(ErrorKind::ParseError, "cannot write " + path);
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorKind::ParseError, "cannot move output into " + path);
  }
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string CsvTable::str() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << "\n";
  }
  return out.str();
}

}  // namespace innerapprox::io

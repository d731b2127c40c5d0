#include "innerapprox/io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

using namespace innerapprox;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "innerapprox_io_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Json, MatrixLayout) {
  CMatrix m(2, 3);
  m << Complex(1, 2), 3, Complex(0, -1), 4, 5, Complex(0.125, 6);
  const io::Json j = io::to_json(m);
  EXPECT_EQ(j["rows"], 2);
  EXPECT_EQ(j["cols"], 3);
  EXPECT_EQ(j["data"][2][1], -1.0);  // row-major
  EXPECT_EQ(j["data"][3][0], 4.0);
  EXPECT_EQ(io::matrix_from_json(j), m);
}

TEST(Json, RoundTripsAreExact) {
  const Colligation col = random_colligation(3, 4, 7, 0.9);
  const io::Json j1 = io::to_json(col);
  const Colligation back = io::colligation_from_json(io::Json::parse(io::dump(j1)));
  EXPECT_EQ(back.system_matrix(), col.system_matrix());
  EXPECT_EQ(io::dump(io::to_json(back)), io::dump(j1));

  Rng rng(1);
  const MatrixPolynomial p({random_contraction(2, 2, rng, 0.3), random_contraction(2, 2, rng, 0.3)});
  const MatrixPolynomial pb = io::polynomial_from_json(io::Json::parse(io::dump(io::to_json(p))));
  EXPECT_EQ(pb.coeffs[1], p.coeffs[1]);

  const BlaschkePotapovProduct prod = random_inner(2, 3, 4);
  const ScaledProduct sp = io::product_from_json(io::Json::parse(io::dump(io::to_json(prod, Complex(0.5, 0.1)))));
  EXPECT_EQ(sp.scale, Complex(0.5, 0.1));
  EXPECT_EQ(sp.product.unitary, prod.unitary);
  EXPECT_EQ(sp.product.factors[2].proj, prod.factors[2].proj);
  EXPECT_FALSE(io::to_json(prod).contains("scale"));

  ConvexCombination comb;
  comb.weights = {0.25, 0.75};
  comb.atoms = {product_colligation(prod), product_colligation(random_inner(2, 1, 9))};
  comb.residual = 0.01;
  const ConvexCombination cb = io::combination_from_json(io::Json::parse(io::dump(io::to_json(comb))));
  EXPECT_EQ(cb.weights, comb.weights);
  EXPECT_EQ(cb.atoms[1].system_matrix(), comb.atoms[1].system_matrix());
  EXPECT_EQ(cb.grid.radii, comb.grid.radii);
}

TEST(Json, FunctionDispatch) {
  const io::FunctionFile a = io::function_from_json(io::to_json(random_colligation(2, 1, 3)));
  EXPECT_TRUE(std::holds_alternative<Colligation>(a));
  const io::FunctionFile b = io::function_from_json(io::to_json(random_inner(2, 1, 3)));
  EXPECT_TRUE(std::holds_alternative<ScaledProduct>(b));
  EXPECT_EQ(io::size_of(b), 2);
  const io::FunctionFile c = io::function_from_json(io::to_json(MatrixPolynomial({CMatrix::Identity(3, 3)})));
  EXPECT_TRUE(std::holds_alternative<MatrixPolynomial>(c));
  EXPECT_LT((io::as_function(c)(0.3) - CMatrix::Identity(3, 3)).norm(), 1e-15);
}

TEST(Json, ParseErrors) {
  auto kind_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::InvalidArgument;
  };
  EXPECT_EQ(kind_of([] { io::matrix_from_json(io::Json{{"rows", 2}, {"cols", 2}, {"data", {{1, 0}}}}); }),
            ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { io::complex_from_json(io::Json::array({1})); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { io::function_from_json(io::Json{{"x", 1}}); }), ErrorKind::ParseError);
  const fs::path bad = scratch("corrupt.json");
  std::ofstream(bad) << "{\"N\": 1, \"coeffs\": [";
  EXPECT_EQ(kind_of([&] { io::read_json(bad.string()); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { io::read_json("/nonexistent/file.json"); }), ErrorKind::ParseError);
}

TEST(Files, AtomicWrite) {
  const fs::path p = scratch("out.txt");
  io::write_atomic(p.string(), "first\n");
  io::write_atomic(p.string(), "second\n");
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "second");
  for (const auto& e : fs::directory_iterator(p.parent_path()))
    EXPECT_EQ(e.path().string().find(".tmp."), std::string::npos);
  EXPECT_THROW(io::write_atomic("/nonexistent/dir/out.txt", "x"), Error);
}

TEST(Csv, Format) {
  io::CsvTable t{{"m", "value"}, {{3, 0.1}, {4, 1e-300}}};
  EXPECT_EQ(t.str(), "m,value\n3,0.1\n4,1e-300\n");
  EXPECT_EQ(std::stod(io::format_double(0.1 + 0.2)), 0.1 + 0.2);
}

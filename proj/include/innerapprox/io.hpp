#ifndef INNERAPPROX_IO_HPP
#define INNERAPPROX_IO_HPP

#include "innerapprox/hull.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <variant>

namespace innerapprox::io {

using Json = nlohmann::ordered_json;

// Complex scalars are [re, im]; matrices are {"rows", "cols", "data"} row-major.
Json to_json(Complex z);
Json to_json(const CMatrix& m);
Json to_json(const Colligation& col);
Json to_json(const MatrixPolynomial& p);
Json to_json(const BlaschkePotapovProduct& prod, Complex scale = 1.0);
Json to_json(const ConvexCombination& comb);

Complex complex_from_json(const Json& j);
CMatrix matrix_from_json(const Json& j);
Colligation colligation_from_json(const Json& j);
MatrixPolynomial polynomial_from_json(const Json& j);
/// Product with an optional "scale" entry (default 1).
ScaledProduct product_from_json(const Json& j);
ConvexCombination combination_from_json(const Json& j);

/// Any of the function files, told apart by their keys.
using FunctionFile = std::variant<MatrixPolynomial, Colligation, ScaledProduct>;
FunctionFile function_from_json(const Json& j);
DiscFunction as_function(const FunctionFile& f);
Index size_of(const FunctionFile& f);

Json read_json(const std::string& path);
/// Writes to a sibling temporary file and renames it into place.
void write_atomic(const std::string& path, const std::string& content);
std::string dump(const Json& j);

/// Shortest text that reads back to the same double; '.' decimal regardless of locale.
std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::string str() const;
};

}  // namespace innerapprox::io

#endif  // INNERAPPROX_IO_HPP

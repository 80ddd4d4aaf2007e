#include "wreath/matrix_io.hpp"

#include <fstream>
#include <sstream>

namespace wreath {

namespace {

using nlohmann::json;

[[noreturn]] void parse_error(const std::string& where, const std::string& msg) {
  throw Error(ErrorKind::kParse, where + ": " + msg);
}

std::size_t read_count(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) parse_error(where, std::string("missing \"") + key + "\"");
  const json& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    parse_error(where + "." + key, "expected a non-negative integer");
  }
  return v.get<std::size_t>();
}

double read_real(const json& j, const std::string& where) {
  if (!j.is_number()) parse_error(where, "expected a number");
  return j.get<double>();
}

}  // namespace

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) {
    parse_error(where, "expected [re, im] or a number");
  }
  return {read_real(j[0], where + "[0]"), read_real(j[1], where + "[1]")};
}

json to_json(const DenseMatrix& m) {
  json data = json::array();
  for (const Complex& z : m.entries()) data.push_back(complex_to_json(z));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

json to_json(const SparseMatrix& m) {
  json triples = json::array();
  for (const Triple& t : m.triples()) {
    triples.push_back(json::array({t.row, t.col, t.value.real(), t.value.imag()}));
  }
  return {{"rows", m.rows()},
          {"cols", m.cols()},
          {"triples", std::move(triples)},
          {"index_base", 0}};
}

DenseMatrix dense_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) parse_error(where, "expected an object");
  const std::size_t rows = read_count(j, "rows", where);
  const std::size_t cols = read_count(j, "cols", where);
  if (!j.contains("data") || !j.at("data").is_array()) {
    parse_error(where, "missing \"data\" array");
  }
  const json& data = j.at("data");
  if (data.size() != rows * cols) {
    parse_error(where + ".data", "has " + std::to_string(data.size()) +
                                     " entries, expected " +
                                     std::to_string(rows * cols));
  }
  std::vector<Complex> entries;
  entries.reserve(data.size());
  for (std::size_t k = 0; k < data.size(); ++k) {
    entries.push_back(
        complex_from_json(data[k], where + ".data[" + std::to_string(k) + "]"));
  }
  try {
    return DenseMatrix(rows, cols, std::move(entries));
  } catch (const Error& e) {
    parse_error(where, e.what());
  }
}

SparseMatrix sparse_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) parse_error(where, "expected an object");
  const std::size_t rows = read_count(j, "rows", where);
  const std::size_t cols = read_count(j, "cols", where);
  std::size_t base = 0;
  if (j.contains("index_base")) {
    base = read_count(j, "index_base", where);
    if (base > 1) parse_error(where + ".index_base", "must be 0 or 1");
  }
  if (!j.contains("triples") || !j.at("triples").is_array()) {
    parse_error(where, "missing \"triples\" array");
  }
  std::vector<Triple> triples;
  const json& arr = j.at("triples");
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const std::string at = where + ".triples[" + std::to_string(k) + "]";
    const json& t = arr[k];
    if (!t.is_array() || (t.size() != 4 && t.size() != 3)) {
      parse_error(at, "expected [i, j, re, im]");
    }
    if (!t[0].is_number_integer() || !t[1].is_number_integer()) {
      parse_error(at, "indices must be integers");
    }
    const long long i = t[0].get<long long>() - static_cast<long long>(base);
    const long long c = t[1].get<long long>() - static_cast<long long>(base);
    if (i < 0 || c < 0 || static_cast<std::size_t>(i) >= rows ||
        static_cast<std::size_t>(c) >= cols) {
      parse_error(at, "index out of range");
    }
    const double re = read_real(t[2], at + "[2]");
    const double im = t.size() == 4 ? read_real(t[3], at + "[3]") : 0.0;
    triples.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(c),
                       {re, im}});
  }
  try {
    return SparseMatrix(rows, cols, std::move(triples));
  } catch (const Error& e) {
    parse_error(where, e.what());
  }
}

AnyMatrix matrix_from_json(const json& j, const std::string& where) {
  if (j.is_object() && j.contains("triples")) return sparse_from_json(j, where);
  if (j.is_object() && j.contains("data")) return dense_from_json(j, where);
  parse_error(where, "neither \"data\" nor \"triples\" present");
}

DenseMatrix as_dense(const AnyMatrix& m, const Limits& limits) {
  if (const auto* d = std::get_if<DenseMatrix>(&m)) return *d;
  return to_dense(std::get<SparseMatrix>(m), limits);
}

SparseMatrix as_sparse(const AnyMatrix& m) {
  if (const auto* s = std::get_if<SparseMatrix>(&m)) return *s;
  return to_sparse(std::get<DenseMatrix>(m));
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) parse_error(path.string(), "cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error& e) {
    parse_error(path.string(), "byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kInvalidArgument, "cannot write " + path.string());
  out << text;
}

}  // namespace wreath

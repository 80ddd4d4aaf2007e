#pragma once

// JSON matrix files.
//
//   dense:  {"rows": r, "cols": c, "data": [[re, im], ...]}        row-major
//   sparse: {"rows": r, "cols": c, "triples": [[i, j, re, im], ...],
//            "index_base": 0}
//
// A bare number is accepted wherever a [re, im] pair is expected. Readers
// accept index_base 0 or 1; writers always emit 0.

#include <filesystem>
#include <string>
#include <variant>

#include <nlohmann/json.hpp>

#include "wreath/tensor.hpp"

namespace wreath {

using AnyMatrix = std::variant<DenseMatrix, SparseMatrix>;

nlohmann::json to_json(const DenseMatrix& m);
nlohmann::json to_json(const SparseMatrix& m);
nlohmann::json complex_to_json(Complex z);
Complex complex_from_json(const nlohmann::json& j, const std::string& where);

/// Detects the layout from the presence of "data" or "triples".
AnyMatrix matrix_from_json(const nlohmann::json& j,
                           const std::string& where = "matrix");
DenseMatrix dense_from_json(const nlohmann::json& j,
                            const std::string& where = "matrix");
SparseMatrix sparse_from_json(const nlohmann::json& j,
                              const std::string& where = "matrix");

DenseMatrix as_dense(const AnyMatrix& m, const Limits& limits = {});
SparseMatrix as_sparse(const AnyMatrix& m);

/// Reads a whole file as JSON; parse errors carry the byte offset.
nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace wreath

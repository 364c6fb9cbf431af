#pragma once

// Matrix and state JSON:
//   { "dim": d, "entries": [[ [re, im], ... ], ...] }   row-major
// States additionally carry "normalization": "normalized" | "subnormalized".

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>

#include "oneshot/errors.hpp"
#include "oneshot/linalg.hpp"

namespace oneshot::io {

using Json = nlohmann::json;

inline Json matrix_to_json(const CMatrix& a) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < a.cols(); ++j) row.push_back({a(i, j).real(), a(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return {{"dim", a.rows()}, {"entries", std::move(rows)}};
}

inline Json matrix_to_json(const HermitianOperator& a) { return matrix_to_json(a.matrix()); }

inline Json state_to_json(const QuantumState& s) {
  Json j = matrix_to_json(s.matrix());
  j["normalization"] = s.is_normalized() ? "normalized" : "subnormalized";
  return j;
}

/// Parses the matrix schema. An entry may also be a bare real number.
inline CMatrix matrix_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("entries")) {
    throw DomainError("matrix JSON: expected an object with \"dim\" and \"entries\"");
  }
  if (!j["dim"].is_number_integer()) throw DomainError("matrix JSON: \"dim\" must be an integer");
  const long long d = j["dim"].get<long long>();
  if (d < 1) throw DomainError("matrix JSON: \"dim\" must be >= 1");
  const Json& rows = j["entries"];
  if (!rows.is_array() || static_cast<long long>(rows.size()) != d) throw DomainError("matrix JSON: \"entries\" must have dim rows");
  CMatrix a(d, d);
  for (long long i = 0; i < d; ++i) {
    const Json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<long long>(row.size()) != d) throw DomainError("matrix JSON: every row must have dim entries");
    for (long long k = 0; k < d; ++k) {
      const Json& e = row[static_cast<std::size_t>(k)];
      if (e.is_number()) {
        a(i, k) = Complex(e.get<double>(), 0.0);
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        a(i, k) = Complex(e[0].get<double>(), e[1].get<double>());
      } else {
        throw DomainError("matrix JSON: entries must be [re, im] pairs");
      }
    }
  }
  return a;
}

inline HermitianOperator hermitian_from_json(const Json& j) { return HermitianOperator(matrix_from_json(j)); }

/// A state; without "normalization" the flag is inferred from the trace.
inline QuantumState state_from_json(const Json& j) {
  const CMatrix a = matrix_from_json(j);
  if (!j.contains("normalization")) return QuantumState::from_matrix(a);
  const std::string n = j["normalization"].is_string() ? j["normalization"].get<std::string>() : "";
  if (n == "normalized") return QuantumState(a, Normalization::normalized);
  if (n == "subnormalized") return QuantumState(a, Normalization::subnormalized);
  throw DomainError("state JSON: \"normalization\" must be \"normalized\" or \"subnormalized\"");
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw DomainError("invalid JSON in " + path + ": " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write " + path);
  out << text;
}

}  // namespace oneshot::io

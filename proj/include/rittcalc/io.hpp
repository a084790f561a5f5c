#pragma once

#include <json.hpp>

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"
#include "poly.hpp"
#include "profile.hpp"
#include "report.hpp"

namespace rittcalc {

using json = nlohmann::ordered_json;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << text;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

inline cplx complex_from_json(const json& v, const std::string& where) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw ParseError(where + ": expected [re, im]");
  return {v[0].get<double>(), v[1].get<double>()};
}

inline json complex_to_json(cplx c) { return json::array({c.real(), c.imag()}); }

inline json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(source + ": malformed JSON at byte offset " + std::to_string(e.byte) +
                     " (" + e.what() + ")");
  }
}

inline ComplexMatrix matrix_from_json(const json& j, const std::string& source = "matrix") {
  if (!j.is_object() || !j.contains("dim") || !j.contains("entries"))
    throw ParseError(source + ": expected an object with \"dim\" and \"entries\"");
  if (!j["dim"].is_number_integer() || j["dim"].get<long long>() < 1)
    throw ParseError(source + ": \"dim\" must be a positive integer");
  const auto d = j["dim"].get<long long>();
  const json& e = j["entries"];
  if (!e.is_array()) throw ParseError(source + ": \"entries\" must be an array");
  if (static_cast<long long>(e.size()) != d * d)
    throw ShapeError(source + ": " + std::to_string(e.size()) + " entries for dim " +
                     std::to_string(d) + " (need dim^2)");
  ComplexMatrix M(d, d);
  for (long long i = 0; i < d; ++i)
    for (long long k = 0; k < d; ++k)
      M(i, k) = complex_from_json(e[static_cast<std::size_t>(i * d + k)],
                                  source + ": entry " + std::to_string(i * d + k));
  require_operator(M, source.c_str());
  return M;
}

inline json matrix_to_json(const ComplexMatrix& M) {
  json entries = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index k = 0; k < M.cols(); ++k) entries.push_back(complex_to_json(M(i, k)));
  json j;
  j["dim"] = M.rows();
  j["entries"] = std::move(entries);
  return j;
}

inline std::string serialize_matrix(const ComplexMatrix& M) { return matrix_to_json(M).dump() + "\n"; }

inline PolySpan poly_from_json(const json& j, const std::string& source = "polynomial") {
  if (!j.is_object() || !j.contains("coeffs"))
    throw ParseError(source + ": expected an object with \"coeffs\"");
  int m = 0;
  if (j.contains("m")) {
    if (!j["m"].is_number_integer()) throw ParseError(source + ": \"m\" must be an integer");
    m = j["m"].get<int>();
  }
  const json& c = j["coeffs"];
  if (!c.is_array() || c.empty()) throw ParseError(source + ": \"coeffs\" must be a nonempty array");
  std::vector<cplx> coeffs;
  for (std::size_t i = 0; i < c.size(); ++i)
    coeffs.push_back(complex_from_json(c[i], source + ": coefficient " + std::to_string(i)));
  return PolySpan(m, std::move(coeffs));
}

inline json poly_to_json(const PolySpan& p) {
  json c = json::array();
  for (const auto& v : p.coeffs) c.push_back(complex_to_json(v));
  json j;
  j["m"] = p.m;
  j["coeffs"] = std::move(c);
  return j;
}

// ---------------------------------------------------------------------------
// Matrix Market
// ---------------------------------------------------------------------------

namespace detail {

/// Whitespace tokenizer that remembers the byte offset of each token.
class Tokens {
 public:
  Tokens(const std::string& text, std::size_t pos) : t_(text), pos_(pos) {}

  bool next(std::string& tok, std::size_t& at) {
    while (pos_ < t_.size()) {
      const char c = t_[pos_];
      if (c == '%') {
        while (pos_ < t_.size() && t_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
    if (pos_ >= t_.size()) return false;
    at = pos_;
    while (pos_ < t_.size() && !std::isspace(static_cast<unsigned char>(t_[pos_]))) ++pos_;
    tok = t_.substr(at, pos_ - at);
    return true;
  }

  double number(const std::string& source) {
    std::string tok;
    std::size_t at = pos_;
    if (!next(tok, at))
      throw ParseError(source + ": unexpected end of input at byte offset " + std::to_string(t_.size()));
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size())
      throw ParseError(source + ": bad number '" + tok + "' at byte offset " + std::to_string(at));
    return v;
  }

  long long integer(const std::string& source) {
    const double v = number(source);
    if (v != std::floor(v)) throw ParseError(source + ": expected an integer");
    return static_cast<long long>(v);
  }

 private:
  const std::string& t_;
  std::size_t pos_;
};

inline std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace detail

/// Matrix Market "array" (column-major) or "coordinate" layout with complex,
/// real or integer field and general symmetry.
inline ComplexMatrix parse_matrix_market(const std::string& text, const std::string& source) {
  const std::size_t eol = text.find('\n');
  std::istringstream header(text.substr(0, eol));
  std::string banner, object, layout, field, symmetry;
  header >> banner >> object >> layout >> field >> symmetry;
  layout = detail::lower(layout);
  field = detail::lower(field);
  if (detail::lower(object) != "matrix" || (layout != "array" && layout != "coordinate"))
    throw ParseError(source + ": unsupported Matrix Market header at byte offset 0");
  if (field != "complex" && field != "real" && field != "integer")
    throw ParseError(source + ": unsupported Matrix Market field '" + field + "'");
  if (!symmetry.empty() && detail::lower(symmetry) != "general")
    throw ParseError(source + ": only general symmetry is supported");
  const bool is_complex = field == "complex";

  detail::Tokens tk(text, eol == std::string::npos ? text.size() : eol + 1);
  const long long rows = tk.integer(source);
  const long long cols = tk.integer(source);
  if (rows < 1 || cols < 1) throw ParseError(source + ": dimensions must be positive");
  if (rows != cols)
    throw ShapeError(source + ": matrix is " + std::to_string(rows) + "x" + std::to_string(cols));
  ComplexMatrix M = ComplexMatrix::Zero(rows, cols);
  auto read_value = [&] {
    const double re = tk.number(source);
    const double im = is_complex ? tk.number(source) : 0.0;
    return cplx(re, im);
  };
  if (layout == "array") {
    for (long long k = 0; k < cols; ++k)
      for (long long i = 0; i < rows; ++i) M(i, k) = read_value();
  } else {
    const long long nnz = tk.integer(source);
    for (long long e = 0; e < nnz; ++e) {
      const long long i = tk.integer(source);
      const long long k = tk.integer(source);
      if (i < 1 || i > rows || k < 1 || k > cols)
        throw ParseError(source + ": index (" + std::to_string(i) + ", " + std::to_string(k) +
                         ") out of range");
      M(i - 1, k - 1) += read_value();
    }
  }
  require_operator(M, source.c_str());
  return M;
}

inline ComplexMatrix parse_matrix_text(const std::string& text, const std::string& source) {
  std::size_t p = 0;
  while (p < text.size() && std::isspace(static_cast<unsigned char>(text[p]))) ++p;
  if (text.compare(p, 14, "%%MatrixMarket") == 0) return parse_matrix_market(text.substr(p), source);
  if (p < text.size() && text[p] == '{') return matrix_from_json(parse_json_text(text, source), source);
  throw ParseError(source + ": unrecognized matrix format at byte offset " + std::to_string(p));
}

/// Reads a JSON matrix file or a Matrix Market file.
inline ComplexMatrix parse_matrix(const std::string& path) {
  return parse_matrix_text(read_file(path), path);
}

inline PolySpan parse_poly(const std::string& path) {
  return poly_from_json(parse_json_text(read_file(path), path), path);
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

inline json report_to_json(const BoundReport& r) {
  json j;
  j["name"] = r.name;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["margin"] = r.margin;
  j["tolerance"] = r.tolerance;
  j["pass"] = r.pass;
  j["inputs"] = r.inputs;
  return j;
}

inline std::string reports_to_csv(const std::vector<BoundReport>& reports) {
  std::string out = "name,lhs,rhs,margin,pass,inputs\n";
  for (const auto& r : reports) {
    out += r.name + ',' + fmt17(r.lhs) + ',' + fmt17(r.rhs) + ',' + fmt17(r.margin) + ',' +
           (r.pass ? "true" : "false") + ",\"" + r.inputs + "\"\n";
  }
  return out;
}

inline std::string reports_to_json(const std::vector<BoundReport>& reports) {
  json arr = json::array();
  for (const auto& r : reports) arr.push_back(report_to_json(r));
  return arr.dump(2) + "\n";
}

inline json profile_to_json(const OperatorProfile& p) {
  json j;
  j["c_tr"] = p.c_tr;
  j["c_kreiss"] = p.c_kreiss;
  j["theta"] = p.theta;
  j["pb"] = p.pb;
  j["c1"] = p.c1;
  j["pb_converged"] = p.pb_converged;
  j["spectral_radius_bound"] = p.spectral_radius_bound;
  j["grid_size"] = p.grid_size;
  j["n_max"] = p.n_max;
  j["argmax_z"] = complex_to_json(p.argmax_z);
  j["tr_refinement_delta"] = p.tr_refinement_delta;
  j["kreiss_refinement_delta"] = p.kreiss_refinement_delta;
  return j;
}

}  // namespace rittcalc

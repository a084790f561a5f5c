#pragma once

#include <cmath>
#include <concepts>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

namespace rittcalc {

/// One checked inequality lhs <= rhs (+ tolerance).
struct BoundReport {
  std::string name;
  double lhs = 0;
  double rhs = 0;
  double tolerance = 0;
  std::string inputs;  // "key=value;key=value"
  bool pass = false;
  double margin = 0;  // rhs - lhs
};

inline BoundReport make_report(std::string name, double lhs, double rhs, double tolerance,
                               std::string inputs) {
  BoundReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.tolerance = tolerance;
  r.inputs = std::move(inputs);
  r.margin = rhs - lhs;
  r.pass = std::isfinite(lhs) && std::isfinite(rhs) && lhs <= rhs + tolerance;
  return r;
}

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string fmt_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

/// Builds the "key=value;..." inputs record with round-trip formatting of doubles.
class Params {
 public:
  Params& add(const std::string& key, double v) { return put(key, fmt17(v)); }
  template <std::integral I>
  Params& add(const std::string& key, I v) {
    return put(key, std::to_string(v));
  }
  Params& add(const std::string& key, const std::string& v) { return put(key, v); }
  Params& add(const std::string& key, const char* v) { return put(key, v); }
  std::string str() const { return s_; }
  operator std::string() const { return s_; }

 private:
  Params& put(const std::string& key, const std::string& v) {
    if (!s_.empty()) s_ += ';';
    s_ += key + '=' + v;
    return *this;
  }
  std::string s_;
};

inline bool all_pass(const std::vector<BoundReport>& reports) {
  for (const auto& r : reports)
    if (!r.pass) return false;
  return true;
}

}  // namespace rittcalc

#pragma once

#include <algorithm>
#include <cmath>
#include <utility>

namespace rittcalc {

struct GoldenResult {
  double x = 0;
  double value = 0;
  double early_value = 0;  // best value after the first `early` iterations
};

/// Golden-section maximization of a (locally unimodal) f on [lo, hi]. Stops
/// after `iters` steps or once the bracket is below `xtol`. The endpoints are
/// never evaluated; callers already hold those samples.
template <class F>
GoldenResult golden_max(F&& f, double lo, double hi, int iters = 80, double xtol = 1e-14,
                        int early = 30) {
  constexpr double g = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = f(x1), f2 = f(x2);
  GoldenResult best{f1 >= f2 ? x1 : x2, std::max(f1, f2), std::max(f1, f2)};
  int it = 0;
  for (; it < iters && (b - a) > xtol * std::max(1.0, std::abs(a)); ++it) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = f(x1);
      if (f1 > best.value) best = {x1, f1, best.early_value};
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = f(x2);
      if (f2 > best.value) best = {x2, f2, best.early_value};
    }
    if (it + 1 == early) best.early_value = best.value;
  }
  if (it < early) best.early_value = best.value;
  return best;
}

}  // namespace rittcalc

#pragma once

// Reference computations that share no code with the library: composite
// Simpson integration on dense grids and finite differences.

#include <cmath>
#include <functional>
#include <utility>

namespace oracle {

using Endpoints = std::function<std::pair<double, double>(double)>;
using Fn = std::function<double(double)>;

inline double simpson(const Fn& h, double lo, double hi, int intervals) {
  if (intervals % 2 != 0) ++intervals;
  const double step = (hi - lo) / intervals;
  double sum = h(lo) + h(hi);
  for (int i = 1; i < intervals; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * h(lo + i * step);
  return sum * step / 3.0;
}

inline Endpoints triangular(double a, double alpha, double beta) {
  return [=](double g) { return std::pair{a - (1.0 - g) * alpha, a + (1.0 - g) * beta}; };
}

/// 1/2 \int [g(a1) + g(a2)] f dy
inline double t1(const Endpoints& e, const Fn& f, const Fn& g, int intervals = 20000) {
  return simpson(
      [&](double y) {
        const auto [a1, a2] = e(y);
        return 0.5 * (g(a1) + g(a2)) * f(y);
      },
      0.0, 1.0, intervals);
}

/// \int [mean of g over [a1, a2]] f dy
inline double t2(const Endpoints& e, const Fn& f, const Fn& g, int intervals = 2000,
                 int inner = 400) {
  return simpson(
      [&](double y) {
        const auto [a1, a2] = e(y);
        if (a2 - a1 < 1e-14) return g(a1) * f(y);
        return simpson(g, a1, a2, inner) / (a2 - a1) * f(y);
      },
      0.0, 1.0, intervals);
}

inline double linear_weight(double y) { return 2.0 * y; }

inline double central_first(const Fn& h, double x, double step) {
  return (h(x + step) - h(x - step)) / (2.0 * step);
}

inline double central_second(const Fn& h, double x, double step) {
  return (h(x + step) - 2.0 * h(x) + h(x - step)) / (step * step);
}

/// Fourth-order accurate first derivative.
inline double five_point(const Fn& h, double x, double step) {
  return (-h(x + 2 * step) + 8 * h(x + step) - 8 * h(x - step) + h(x - 2 * step)) / (12 * step);
}

inline double relative(double got, double want) {
  return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

}  // namespace oracle

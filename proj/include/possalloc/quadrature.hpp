#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace possalloc {

/// Gauss–Legendre rule mapped to the unit interval [0, 1].
///
/// Weights sum to one, so `sum_i weight[i] * g(node[i])` approximates
/// `\int_0^1 g`. An n-point rule integrates polynomials of degree 2n-1
/// exactly.
class GaussLegendre {
 public:
  explicit GaussLegendre(std::size_t points);

  [[nodiscard]] std::size_t size() const noexcept { return nodes_.size(); }
  [[nodiscard]] std::span<const double> nodes() const noexcept { return nodes_; }
  [[nodiscard]] std::span<const double> weights() const noexcept { return weights_; }

  template <class F>
  [[nodiscard]] double integrate(F&& f) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) sum += weights_[i] * f(nodes_[i]);
    return sum;
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

}  // namespace possalloc

#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <string>

#include "possalloc/error.hpp"
#include "possalloc/fuzzy.hpp"
#include "possalloc/quadrature.hpp"

namespace possalloc {

enum class OperatorKind {
  T1,  ///< f-weighted mean of g at the two level endpoints
  T2,  ///< f-weighted mean of the average of g over each level interval
};

[[nodiscard]] std::string to_string(OperatorKind kind);

struct QuadratureSettings {
  std::size_t outer_nodes = 64;  ///< gamma direction
  std::size_t inner_nodes = 32;  ///< x direction within a level set (T2 only)
};

inline constexpr std::size_t kMinQuadratureNodes = 8;
/// Level intervals narrower than this are treated as points by T2.
inline constexpr double kDegenerateWidth = 1e-12;

/// Expected utility operator T(A, g) evaluated by Gauss–Legendre quadrature.
///
/// T1(A, g) = 1/2 \int_0^1 [g(a1(y)) + g(a2(y))] f(y) dy
/// T2(A, g) = \int_0^1 [1/(a2-a1) \int_{a1}^{a2} g(x) dx] f(y) dy
///
/// For T2 a degenerate level interval contributes g(a1(y)), the limit of the
/// interval mean. Immutable; copies share the precomputed rules.
class EUOperator {
 public:
  explicit EUOperator(OperatorKind kind, WeightingFunction weighting = WeightingFunction::linear(),
                      QuadratureSettings quadrature = {});

  [[nodiscard]] OperatorKind kind() const noexcept { return kind_; }
  [[nodiscard]] const WeightingFunction& weighting() const noexcept { return weighting_; }
  [[nodiscard]] const QuadratureSettings& quadrature() const noexcept { return quadrature_; }

  /// Generalized possibilistic expected utility T(A, g). Throws
  /// EvaluationError when the quadrature sum is not finite.
  template <class G>
  [[nodiscard]] double operator()(const FuzzyNumber& a, G&& g) const;

 private:
  struct Rules {
    GaussLegendre outer;
    GaussLegendre inner;
    std::vector<double> outer_weights;  // quadrature weight times f(node)
  };

  OperatorKind kind_;
  WeightingFunction weighting_;
  QuadratureSettings quadrature_;
  std::shared_ptr<const Rules> rules_;
};

template <class G>
double EUOperator::operator()(const FuzzyNumber& a, G&& g) const {
  const auto& rules = *rules_;
  const auto gammas = rules.outer.nodes();
  double sum = 0.0;
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    const auto cut = a.level_set(gammas[i]);
    double level = 0.0;
    if (kind_ == OperatorKind::T1) {
      level = 0.5 * (g(cut.lower) + g(cut.upper));
    } else if (cut.width() < kDegenerateWidth) {
      level = g(cut.lower);
    } else {
      const auto xs = rules.inner.nodes();
      const auto ws = rules.inner.weights();
      for (std::size_t j = 0; j < xs.size(); ++j) level += ws[j] * g(cut.lower + cut.width() * xs[j]);
    }
    sum += rules.outer_weights[i] * level;
  }
  if (!std::isfinite(sum)) throw EvaluationError("expected utility operator produced a non-finite value");
  return sum;
}

/// T(A, g); same as `op(a, g)`.
template <class G>
[[nodiscard]] double geu(const EUOperator& op, const FuzzyNumber& a, G&& g) {
  return op(a, std::forward<G>(g));
}

/// E_f(A) = 1/2 \int_0^1 [a1(y) + a2(y)] f(y) dy.
[[nodiscard]] double expected_value(const WeightingFunction& f, const FuzzyNumber& a,
                                    std::size_t nodes = QuadratureSettings{}.outer_nodes);

/// A shifted so that E_f(A) = 0.
[[nodiscard]] FuzzyNumber centered(const FuzzyNumber& a, const WeightingFunction& f,
                                   std::size_t nodes = QuadratureSettings{}.outer_nodes);

/// T(A, x^k) for k >= 1.
[[nodiscard]] double moment(const EUOperator& op, const FuzzyNumber& a, int k);

struct MomentSet {
  double expected_value = 0.0;
  double variance = 0.0;  ///< T(A, (x - E)^2)
  double skewness = 0.0;  ///< T(A, (x - E)^3)
  double kurtosis = 0.0;  ///< T(A, (x - E)^4)
  double m2 = 0.0;        ///< T(A, x^2)
  double m3 = 0.0;
  double m4 = 0.0;
};

[[nodiscard]] MomentSet central_moments(const EUOperator& op, const FuzzyNumber& a);

/// Closed-form T1 moments of a triangular fuzzy number under f(y) = 2y.
/// Throws UnsupportedConfiguration for any other operator or weighting.
[[nodiscard]] MomentSet triangular_closed_moments(const TriangularShape& shape,
                                                  const EUOperator& op);
[[nodiscard]] MomentSet triangular_closed_moments(double peak, double left_spread,
                                                  double right_spread);

/// g(x, lambda)
using ParametricFunction = std::function<double(double, double)>;

/// |T(A, dg/dlambda(., l0)) - [T(A, g(., l0+h)) - T(A, g(., l0-h))] / 2h|.
/// The partial derivative is supplied by the caller.
[[nodiscard]] double check_d_property(const EUOperator& op, const FuzzyNumber& a,
                                      const ParametricFunction& g,
                                      const ParametricFunction& dg_dlambda, double lambda0,
                                      double step);

}  // namespace possalloc

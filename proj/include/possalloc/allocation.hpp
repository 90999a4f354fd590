#pragma once

#include <array>
#include <string>

#include "possalloc/model.hpp"

namespace possalloc {

/// Coefficient multiplying alpha'(0)^3 T(A, x^4) in the third-order relation.
///
/// Differentiating the order-3 first-order condition three times and dividing
/// by u''(w) gives u''''(w)/u''(w) = T_u(w) P_u(w) (`product`, the default and
/// the one that matches the exact optimum to O(k^4)). `as_printed` uses
/// T_u(w)/P_u(w) instead, reproducing the published third-order formulas and
/// their CRRA example verbatim.
enum class TemperanceCoupling { product, as_printed };

[[nodiscard]] std::string to_string(TemperanceCoupling coupling);

/// F1..F6, stored zero-based.
using FTerms = std::array<double, 6>;

struct AllocationDiagnostics {
  double wealth = 0.0;
  MomentSet moments;
  RiskIndicators indicators;
  IndicatorRatios ratios;
};

struct AllocationResult {
  double k = 0.0;
  double alpha_order2 = 0.0;  ///< k a'(0) + k^2 a''(0) / 2
  double alpha_order3 = 0.0;  ///< alpha_order2 + k^3 a'''(0) / 6
  double alpha_prime0 = 0.0;
  double alpha_doubleprime0 = 0.0;
  double alpha_tripleprime0 = 0.0;
  /// Third-order value assembled from F1..F6; equals alpha_order3 up to
  /// rounding.
  double alpha_order3_fterms = 0.0;
  FTerms f_terms{};
  TemperanceCoupling coupling = TemperanceCoupling::product;
  AllocationDiagnostics diagnostics;
};

/// alpha'(0) = mu / (T(A, x^2) r_u(w)). Throws DegenerateModel on zero
/// variance or zero risk aversion.
[[nodiscard]] double alpha_prime0(const PortfolioModel& m);

/// alpha''(0) = P_u / r_u^2 * T(A, x^3) / T(A, x^2)^3 * mu^2.
[[nodiscard]] double alpha_doubleprime0(const PortfolioModel& m);

/// alpha'''(0) solved from the linear relation obtained by differentiating
/// the order-3 first-order condition three times at k = 0:
///
///   a''' T(A,x^2) + 6 a' mu^2 - 3 P_u [a' a'' T(A,x^3) + 3 mu a'^2 T(A,x^2)]
///       + c a'^3 T(A,x^4) = 0,   c = T_u P_u  (or T_u / P_u as printed).
[[nodiscard]] double alpha_tripleprime0(const PortfolioModel& m,
                                        TemperanceCoupling coupling = TemperanceCoupling::product);

[[nodiscard]] double approx_order2(const PortfolioModel& m);
[[nodiscard]] double approx_order3(const PortfolioModel& m,
                                   TemperanceCoupling coupling = TemperanceCoupling::product);

/// F1..F6 from central moments and indicator ratios:
/// F1 = 1/(r V), F2 = P S/(r^2 V^3), F3 = 1/(r V^2), F4 = P^2 S^2/(r^3 V^5),
/// F5 = P/(r^2 V^2), F6 = c K/(r^3 V^4) with c as in TemperanceCoupling.
[[nodiscard]] FTerms f_terms(const PortfolioModel& m,
                             TemperanceCoupling coupling = TemperanceCoupling::product);

/// k mu F1 + (k mu)^2 F2 / 2
[[nodiscard]] double approx_order2_fterms(const PortfolioModel& m);
/// k mu F1 + (k mu)^2 F2 / 2 - (k mu)^3 [F3 - F4/2 - 3 F5/2 + F6/6]
[[nodiscard]] double approx_order3_fterms(const PortfolioModel& m,
                                          TemperanceCoupling coupling = TemperanceCoupling::product);

/// Everything above in one pass, with a moment and indicator snapshot.
[[nodiscard]] AllocationResult allocate(const PortfolioModel& m,
                                        TemperanceCoupling coupling = TemperanceCoupling::product);

}  // namespace possalloc

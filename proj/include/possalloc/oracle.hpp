#pragma once

#include <array>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "possalloc/model.hpp"

namespace possalloc {

struct FocSolverConfig {
  double bracket_init = 1.0;
  double bracket_growth = 2.0;
  int max_expansions = 60;
  double root_tolerance = 1e-10;  ///< bound on |V'(alpha*)|
  int max_iterations = 200;

  /// Throws InvalidParameter on a non-positive tolerance or growth <= 1.
  void validate() const;
};

struct OracleResult {
  double alpha_star = 0.0;
  double foc_residual = 0.0;  ///< V'(alpha_star)
  double v_at_star = 0.0;
  /// Largest V'' sampled on a grid around [0, alpha_star]; <= 0 for a
  /// concave total utility.
  double concavity_certificate = 0.0;
  int expansions = 0;
  int boundary_shrinks = 0;  ///< bracket steps pulled back inside the utility domain
  int iterations = 0;
  /// (alpha, V'(alpha)) for every point evaluated while bracketing and bisecting.
  std::vector<std::pair<double, double>> trace;
};

/// Open interval of allocations keeping w + alpha (k mu + x) inside the
/// utility domain for every x in the support of A.
struct AllocationRange {
  double lower = 0.0;
  double upper = 0.0;

  [[nodiscard]] bool contains(double alpha) const noexcept { return alpha > lower && alpha < upper; }
};

[[nodiscard]] AllocationRange feasible_allocations(const PortfolioModel& m);

/// V(alpha) = T(A, u(w + alpha (k mu + x))). Throws DomainError naming the
/// support endpoint whose wealth leaves the utility domain.
[[nodiscard]] double total_utility(const PortfolioModel& m, double alpha);
/// V'(alpha) = T(A, (k mu + x) u'(w + alpha (k mu + x)))
[[nodiscard]] double v_prime(const PortfolioModel& m, double alpha);
/// V''(alpha) = T(A, (k mu + x)^2 u''(w + alpha (k mu + x)))
[[nodiscard]] double v_doubleprime(const PortfolioModel& m, double alpha);

/// Maximizes V by bracketing and bisecting V' = 0 with the exact u'.
/// Returns alpha* = 0 for k = 0. Throws NoInteriorOptimum when V' keeps its
/// sign over the whole expansion.
[[nodiscard]] OracleResult solve_foc(const PortfolioModel& m, const FocSolverConfig& config = {});

/// T(A, (s + x)^p) for s = k mu, by binomial expansion over raw T-moments.
[[nodiscard]] double shifted_moment(const PortfolioModel& m, int power, double k);
/// Same quantity by direct quadrature.
[[nodiscard]] double shifted_moment_direct(const PortfolioModel& m, int power, double k);

struct PolynomialFoc {
  /// c_j = u^(j+1)(w) / j! * T(A, (k mu + x)^(j+1)), j = 0..n
  std::vector<double> coefficients;
  std::vector<double> roots;  ///< real roots, ascending
  std::optional<std::size_t> principal;

  [[nodiscard]] std::optional<double> principal_root() const {
    if (!principal) return std::nullopt;
    return roots[*principal];
  }
};

/// Real roots of the order-n truncated first-order condition
/// sum_j c_j alpha^j = 0, 1 <= n <= 3. The root nearest `reference` (by
/// default the solve_foc optimum at this k) is tagged principal.
[[nodiscard]] PolynomialFoc polynomial_foc(const PortfolioModel& m, int n, double k,
                                           std::optional<double> reference = std::nullopt);

/// Newton divided differences of the given order over (x, y) samples.
[[nodiscard]] std::vector<double> divided_differences(std::span<const double> x,
                                                      std::span<const double> y, int order);

}  // namespace possalloc

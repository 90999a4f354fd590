#pragma once

#include <optional>

#include "possalloc/fuzzy.hpp"
#include "possalloc/operators.hpp"
#include "possalloc/utility.hpp"

namespace possalloc {

/// |E_f(A)| allowed for the centered risk component.
inline constexpr double kCenteringTolerance = 1e-8;

/// One instance of the standard possibilistic portfolio model.
///
/// The investor splits w0 between a risk-free asset returning r and a risky
/// asset whose excess return is k*mu + A, with E_f(A) = 0. Final wealth is
/// w + alpha (k mu + x), w = w0 (1 + r), and the total utility is
/// V(alpha) = T(A, u(w + alpha (k mu + x))).
class PortfolioModel {
 public:
  /// Throws InvalidParameter when mu <= 0, k < 0, A is not centered or w is
  /// outside the utility domain.
  PortfolioModel(double w0, double r, double k, double mu, FuzzyNumber risk, UtilityModel utility,
                 EUOperator op);

  /// Builds the model from the gross return B0 of the risky asset. The
  /// excess mean E_f(B0 - r) fixes only the product k*mu: mu defaults to 1,
  /// a single given factor determines the other, and when both are given
  /// they must reproduce the excess mean.
  static PortfolioModel from_return(double w0, double r, const FuzzyNumber& gross_return,
                                    UtilityModel utility, EUOperator op,
                                    std::optional<double> k = std::nullopt,
                                    std::optional<double> mu = std::nullopt);

  [[nodiscard]] double initial_wealth() const noexcept { return w0_; }
  [[nodiscard]] double risk_free_rate() const noexcept { return r_; }
  [[nodiscard]] double k() const noexcept { return k_; }
  [[nodiscard]] double mu() const noexcept { return mu_; }
  /// k * mu = E_f(B)
  [[nodiscard]] double excess_mean() const noexcept { return k_ * mu_; }
  /// w = w0 (1 + r)
  [[nodiscard]] double wealth() const noexcept { return w0_ * (1.0 + r_); }
  [[nodiscard]] const FuzzyNumber& risk() const noexcept { return risk_; }
  [[nodiscard]] const UtilityModel& utility() const noexcept { return utility_; }
  [[nodiscard]] const EUOperator& op() const noexcept { return op_; }

  [[nodiscard]] PortfolioModel with_k(double k) const;
  [[nodiscard]] PortfolioModel with_risk(FuzzyNumber risk) const;

 private:
  double w0_;
  double r_;
  double k_;
  double mu_;
  FuzzyNumber risk_;
  UtilityModel utility_;
  EUOperator op_;
};

}  // namespace possalloc

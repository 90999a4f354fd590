#pragma once

#include <array>
#include <functional>
#include <limits>
#include <string>
#include <variant>
#include <vector>

namespace possalloc {

/// Open interval of admissible wealth levels.
struct WealthDomain {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();

  [[nodiscard]] bool contains(double w) const noexcept { return w > lower && w < upper; }
};

enum class UtilityFamily { crra, hara, cara, custom };

[[nodiscard]] std::string to_string(UtilityFamily family);

/// u(w) = w^a / a, a < 1, a != 0.
struct CrraParameters {
  double a = 0.5;
};
/// u(w) = zeta (delta + w / gamma)^(1 - gamma) on delta + w / gamma > 0.
struct HaraParameters {
  double zeta = 1.0;
  double delta = 0.0;
  double gamma = 2.0;
};
/// u(w) = -exp(-c w) / c, c > 0.
struct CaraParameters {
  double c = 1.0;
};
/// u(w) = sum_i coefficients[i] w^i.
struct PolynomialParameters {
  std::vector<double> coefficients;
};
struct OpaqueParameters {};

/// Utility function with closed-form derivatives up to order four.
///
/// The named families validate their parameters so that u is increasing and
/// concave on the whole domain. Custom models only get that check at the
/// wealth points the caller lists.
class UtilityModel {
 public:
  /// u, u', u'', u''', u''''
  using Derivatives = std::array<double, 5>;
  using Evaluator = std::function<Derivatives(double)>;
  using Parameters = std::variant<CrraParameters, HaraParameters, CaraParameters,
                                  PolynomialParameters, OpaqueParameters>;

  static constexpr int kMaxOrder = 4;

  static UtilityModel crra(double a);
  static UtilityModel hara(double zeta, double delta, double gamma);
  static UtilityModel cara(double c);
  /// Polynomial utility; `check_points` are wealth levels where u' > 0 and
  /// u'' <= 0 are enforced (none: no shape check).
  static UtilityModel polynomial(std::vector<double> coefficients, WealthDomain domain = {},
                                 const std::vector<double>& check_points = {});
  static UtilityModel custom(std::string name, Evaluator evaluator, WealthDomain domain,
                             const std::vector<double>& check_points = {});

  [[nodiscard]] UtilityFamily family() const noexcept { return family_; }
  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] const WealthDomain& domain() const noexcept { return domain_; }
  [[nodiscard]] const Parameters& parameters() const noexcept { return parameters_; }
  [[nodiscard]] bool in_domain(double w) const noexcept { return domain_.contains(w); }

  /// All derivatives of order 0..4 at w. Throws DomainError outside the domain.
  [[nodiscard]] Derivatives at(double w) const;
  [[nodiscard]] double derivative(int order, double w) const;
  [[nodiscard]] double value(double w) const { return derivative(0, w); }

 private:
  UtilityModel(UtilityFamily family, std::string name, Evaluator evaluator, WealthDomain domain,
               Parameters parameters);

  UtilityFamily family_;
  std::string name_;
  Evaluator evaluator_;
  WealthDomain domain_;
  Parameters parameters_;
};

/// [u(w), u'(w), ..., u^(order)(w)] for 0 <= order <= 4.
[[nodiscard]] std::vector<double> derivatives(const UtilityModel& u, double w, int order);

/// Violations of u' > 0 and u'' <= 0 at the given wealth points (empty when
/// none). Points outside the domain are reported as violations.
[[nodiscard]] std::vector<std::string> shape_violations(const UtilityModel& u,
                                                        const std::vector<double>& wealth);

struct RiskIndicators {
  double risk_aversion = 0.0;  ///< r_u = -u''/u'
  double prudence = 0.0;       ///< P_u = -u'''/u''
  double temperance = 0.0;     ///< T_u = -u''''/u'''
};

/// Each throws IndicatorUndefined when its denominator vanishes.
[[nodiscard]] double risk_aversion(const UtilityModel& u, double w);
[[nodiscard]] double prudence(const UtilityModel& u, double w);
[[nodiscard]] double temperance(const UtilityModel& u, double w);
[[nodiscard]] RiskIndicators indicators(const UtilityModel& u, double w);

/// Composite ratios entering the third-order allocation terms.
struct IndicatorRatios {
  double inverse_risk_aversion = 0.0;  ///< 1 / r_u
  double prudence_ratio = 0.0;         ///< P_u / r_u^2
  double prudence_squared_ratio = 0.0; ///< P_u^2 / r_u^3
  double temperance_ratio = 0.0;       ///< T_u / (P_u r_u^3)
  double temperance_product_ratio = 0.0;  ///< T_u P_u / r_u^3
};

[[nodiscard]] IndicatorRatios indicator_ratios(const UtilityModel& u, double w);

}  // namespace possalloc

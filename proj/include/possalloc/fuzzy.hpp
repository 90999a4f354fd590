#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace possalloc {

/// Closed interval [lower, upper] produced by a gamma-cut.
struct LevelInterval {
  double lower = 0.0;
  double upper = 0.0;

  [[nodiscard]] double width() const noexcept { return upper - lower; }
  [[nodiscard]] double midpoint() const noexcept { return 0.5 * (lower + upper); }

  /// True when `inner` lies within this interval, up to `slack` on each side.
  [[nodiscard]] bool contains(const LevelInterval& inner, double slack = 0.0) const noexcept {
    return inner.lower >= lower - slack && inner.upper <= upper + slack;
  }

  friend bool operator==(const LevelInterval&, const LevelInterval&) = default;
};

/// Triangular fuzzy number given by its peak and the two spreads.
/// Level sets are [peak - (1-g) left, peak + (1-g) right].
struct TriangularShape {
  double peak = 0.0;
  double left_spread = 0.0;
  double right_spread = 0.0;

  friend bool operator==(const TriangularShape&, const TriangularShape&) = default;
};

/// Endpoints sampled on an increasing gamma grid from 0 to 1; linear
/// interpolation in between.
struct TabulatedEndpoints {
  std::vector<double> gamma;
  std::vector<double> lower;
  std::vector<double> upper;
};

/// A fuzzy number described by its gamma-level sets.
///
/// Immutable value type. Three representations share one interface:
/// triangular (closed form), tabulated (piecewise linear endpoints) and
/// general (arbitrary endpoint function checked for nesting on a grid).
class FuzzyNumber {
 public:
  enum class Kind { triangular, tabulated, general };
  using EndpointFunction = std::function<LevelInterval(double)>;

  static constexpr std::size_t kDefaultGridSize = 257;

  /// Throws InvalidParameter on a negative or non-finite spread.
  static FuzzyNumber triangular(double peak, double left_spread, double right_spread);
  static FuzzyNumber crisp(double value) { return triangular(value, 0.0, 0.0); }

  /// Throws InvalidParameter unless the grid starts at 0, ends at 1, is
  /// strictly increasing and the endpoints describe nested intervals.
  static FuzzyNumber tabulated(std::vector<double> gamma, std::vector<double> lower,
                               std::vector<double> upper);

  /// Samples `source` on a uniform grid of `grid_size` levels.
  static FuzzyNumber tabulate(const FuzzyNumber& source,
                              std::size_t grid_size = kDefaultGridSize);

  /// Wraps an endpoint function; nesting is checked on `check_grid` levels.
  static FuzzyNumber from_endpoints(EndpointFunction endpoints,
                                    std::size_t check_grid = kDefaultGridSize);

  [[nodiscard]] Kind kind() const noexcept;

  /// Throws DomainError when gamma is outside [0, 1].
  [[nodiscard]] LevelInterval level_set(double gamma) const;
  [[nodiscard]] LevelInterval support() const { return level_set(0.0); }
  [[nodiscard]] LevelInterval core() const { return level_set(1.0); }

  /// Translation by `offset` at every level. Triangular stays triangular.
  [[nodiscard]] FuzzyNumber shifted(double offset) const;
  /// Level sets multiplied by `factor` > 0.
  [[nodiscard]] FuzzyNumber scaled(double factor) const;

  [[nodiscard]] std::optional<TriangularShape> triangular_shape() const;
  [[nodiscard]] const TabulatedEndpoints* tabulated_endpoints() const noexcept;

 private:
  struct General {
    EndpointFunction endpoints;
  };
  using Representation =
      std::variant<TriangularShape, std::shared_ptr<const TabulatedEndpoints>,
                   std::shared_ptr<const General>>;

  explicit FuzzyNumber(Representation rep) : rep_(std::move(rep)) {}

  Representation rep_;
};

/// Weighting function f on [0, 1]: non-negative, increasing, unit integral.
///
/// The default is f(g) = 2g. A power family `scale * g^exponent` covers the
/// uniform weighting and deliberately invalid choices such as 3g; arbitrary
/// callables are accepted as custom weightings.
class WeightingFunction {
 public:
  struct Power {
    double scale = 2.0;
    double exponent = 1.0;
  };

  /// f(g) = 2g.
  static WeightingFunction linear() { return power(2.0, 1.0); }
  /// f(g) = 1.
  static WeightingFunction uniform() { return power(1.0, 0.0); }
  static WeightingFunction power(double scale, double exponent);
  static WeightingFunction custom(std::function<double(double)> f, std::string description);

  [[nodiscard]] double operator()(double gamma) const;

  /// True for exactly f(g) = 2g, the weighting behind every closed form.
  [[nodiscard]] bool is_default() const noexcept;
  [[nodiscard]] const std::optional<Power>& power_parameters() const noexcept { return power_; }
  [[nodiscard]] std::string description() const;

 private:
  WeightingFunction() = default;

  std::optional<Power> power_;
  std::function<double(double)> custom_;
  std::string description_;
};

struct WeightingReport {
  double integral = 0.0;
  double min_value = 0.0;
  /// Largest drop f(g_i) - f(g_{i+1}) seen on the grid (<= 0 when monotone).
  double max_decrease = 0.0;
  bool non_negative = true;
  bool monotone = true;
  bool unit_integral = true;
  std::vector<std::string> violations;

  [[nodiscard]] bool valid() const noexcept { return violations.empty(); }
  [[nodiscard]] double integral_residual() const noexcept { return integral - 1.0; }
};

inline constexpr double kWeightingIntegralTolerance = 1e-8;
inline constexpr double kWeightingMonotoneSlack = 1e-12;

/// Checks non-negativity and monotonicity on a uniform grid of
/// `grid_size` >= 2 points and the unit integral by adaptive quadrature.
[[nodiscard]] WeightingReport validate_weighting(const WeightingFunction& f,
                                                 std::size_t grid_size = 257);

}  // namespace possalloc

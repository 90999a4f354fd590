#include "possalloc/fuzzy.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "possalloc/error.hpp"

namespace possalloc {
namespace {

constexpr double kNestingSlack = 1e-12;

void require_finite(double value, const char* what) {
  if (!std::isfinite(value)) throw InvalidParameter(std::string(what) + " must be finite");
}

void check_nested(const std::vector<double>& gamma, const std::vector<double>& lower,
                  const std::vector<double>& upper) {
  for (std::size_t i = 1; i < gamma.size(); ++i) {
    if (lower[i] < lower[i - 1] - kNestingSlack || upper[i] > upper[i - 1] + kNestingSlack) {
      std::ostringstream msg;
      msg << "level sets are not nested between gamma=" << gamma[i - 1] << " and gamma="
          << gamma[i];
      throw InvalidParameter(msg.str());
    }
  }
  if (lower.back() > upper.back() + kNestingSlack) {
    throw InvalidParameter("core interval is empty: a1(1) > a2(1)");
  }
}

LevelInterval interpolate(const TabulatedEndpoints& table, double gamma) {
  const auto& g = table.gamma;
  auto it = std::upper_bound(g.begin(), g.end(), gamma);
  if (it == g.end()) return {table.lower.back(), table.upper.back()};
  const auto hi = static_cast<std::size_t>(it - g.begin());
  const auto lo = hi - 1;
  const double t = (gamma - g[lo]) / (g[hi] - g[lo]);
  return {table.lower[lo] + t * (table.lower[hi] - table.lower[lo]),
          table.upper[lo] + t * (table.upper[hi] - table.upper[lo])};
}

}  // namespace

FuzzyNumber FuzzyNumber::triangular(double peak, double left_spread, double right_spread) {
  require_finite(peak, "peak");
  require_finite(left_spread, "left spread");
  require_finite(right_spread, "right spread");
  if (left_spread < 0.0 || right_spread < 0.0) {
    throw InvalidParameter("triangular spreads must be non-negative");
  }
  return FuzzyNumber(TriangularShape{peak, left_spread, right_spread});
}

FuzzyNumber FuzzyNumber::tabulated(std::vector<double> gamma, std::vector<double> lower,
                                   std::vector<double> upper) {
  if (gamma.size() < 2) throw InvalidParameter("tabulated fuzzy number needs at least 2 levels");
  if (lower.size() != gamma.size() || upper.size() != gamma.size()) {
    throw InvalidParameter("tabulated gamma, a1 and a2 must have equal length");
  }
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    require_finite(gamma[i], "gamma");
    require_finite(lower[i], "a1");
    require_finite(upper[i], "a2");
  }
  if (gamma.front() != 0.0 || gamma.back() != 1.0) {
    throw InvalidParameter("tabulated gamma grid must start at 0 and end at 1");
  }
  if (std::adjacent_find(gamma.begin(), gamma.end(), std::greater_equal<>()) != gamma.end()) {
    throw InvalidParameter("tabulated gamma grid must be strictly increasing");
  }
  check_nested(gamma, lower, upper);
  return FuzzyNumber(std::make_shared<const TabulatedEndpoints>(
      TabulatedEndpoints{std::move(gamma), std::move(lower), std::move(upper)}));
}

FuzzyNumber FuzzyNumber::tabulate(const FuzzyNumber& source, std::size_t grid_size) {
  if (grid_size < 2) throw InvalidParameter("grid size must be at least 2");
  std::vector<double> gamma(grid_size), lower(grid_size), upper(grid_size);
  for (std::size_t i = 0; i < grid_size; ++i) {
    gamma[i] = static_cast<double>(i) / static_cast<double>(grid_size - 1);
    const auto cut = source.level_set(gamma[i]);
    lower[i] = cut.lower;
    upper[i] = cut.upper;
  }
  gamma.back() = 1.0;
  return tabulated(std::move(gamma), std::move(lower), std::move(upper));
}

FuzzyNumber FuzzyNumber::from_endpoints(EndpointFunction endpoints, std::size_t check_grid) {
  if (!endpoints) throw InvalidParameter("endpoint function is empty");
  if (check_grid < 2) throw InvalidParameter("grid size must be at least 2");
  std::vector<double> gamma(check_grid), lower(check_grid), upper(check_grid);
  for (std::size_t i = 0; i < check_grid; ++i) {
    gamma[i] = static_cast<double>(i) / static_cast<double>(check_grid - 1);
    const auto cut = endpoints(gamma[i]);
    require_finite(cut.lower, "a1");
    require_finite(cut.upper, "a2");
    lower[i] = cut.lower;
    upper[i] = cut.upper;
  }
  check_nested(gamma, lower, upper);
  return FuzzyNumber(std::make_shared<const General>(General{std::move(endpoints)}));
}

FuzzyNumber::Kind FuzzyNumber::kind() const noexcept {
  switch (rep_.index()) {
    case 0:
      return Kind::triangular;
    case 1:
      return Kind::tabulated;
    default:
      return Kind::general;
  }
}

LevelInterval FuzzyNumber::level_set(double gamma) const {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    std::ostringstream msg;
    msg << "level " << gamma << " outside [0, 1]";
    throw DomainError(msg.str());
  }
  if (const auto* tri = std::get_if<TriangularShape>(&rep_)) {
    const double open = 1.0 - gamma;
    return {tri->peak - open * tri->left_spread, tri->peak + open * tri->right_spread};
  }
  if (const auto* table = std::get_if<std::shared_ptr<const TabulatedEndpoints>>(&rep_)) {
    return interpolate(**table, gamma);
  }
  return std::get<std::shared_ptr<const General>>(rep_)->endpoints(gamma);
}

FuzzyNumber FuzzyNumber::shifted(double offset) const {
  require_finite(offset, "shift");
  if (const auto* tri = std::get_if<TriangularShape>(&rep_)) {
    return FuzzyNumber(TriangularShape{tri->peak + offset, tri->left_spread, tri->right_spread});
  }
  if (const auto* table = std::get_if<std::shared_ptr<const TabulatedEndpoints>>(&rep_)) {
    TabulatedEndpoints moved = **table;
    for (auto& v : moved.lower) v += offset;
    for (auto& v : moved.upper) v += offset;
    return FuzzyNumber(std::make_shared<const TabulatedEndpoints>(std::move(moved)));
  }
  auto inner = std::get<std::shared_ptr<const General>>(rep_);
  return FuzzyNumber(std::make_shared<const General>(General{[inner, offset](double g) {
    const auto cut = inner->endpoints(g);
    return LevelInterval{cut.lower + offset, cut.upper + offset};
  }}));
}

FuzzyNumber FuzzyNumber::scaled(double factor) const {
  require_finite(factor, "scale factor");
  if (factor <= 0.0) throw InvalidParameter("scale factor must be positive");
  if (const auto* tri = std::get_if<TriangularShape>(&rep_)) {
    return FuzzyNumber(TriangularShape{tri->peak * factor, tri->left_spread * factor,
                                       tri->right_spread * factor});
  }
  if (const auto* table = std::get_if<std::shared_ptr<const TabulatedEndpoints>>(&rep_)) {
    TabulatedEndpoints stretched = **table;
    for (auto& v : stretched.lower) v *= factor;
    for (auto& v : stretched.upper) v *= factor;
    return FuzzyNumber(std::make_shared<const TabulatedEndpoints>(std::move(stretched)));
  }
  auto inner = std::get<std::shared_ptr<const General>>(rep_);
  return FuzzyNumber(std::make_shared<const General>(General{[inner, factor](double g) {
    const auto cut = inner->endpoints(g);
    return LevelInterval{cut.lower * factor, cut.upper * factor};
  }}));
}

std::optional<TriangularShape> FuzzyNumber::triangular_shape() const {
  if (const auto* tri = std::get_if<TriangularShape>(&rep_)) return *tri;
  return std::nullopt;
}

const TabulatedEndpoints* FuzzyNumber::tabulated_endpoints() const noexcept {
  if (const auto* table = std::get_if<std::shared_ptr<const TabulatedEndpoints>>(&rep_)) {
    return table->get();
  }
  return nullptr;
}

// ---------------------------------------------------------------------------

WeightingFunction WeightingFunction::power(double scale, double exponent) {
  require_finite(scale, "weighting scale");
  require_finite(exponent, "weighting exponent");
  if (exponent < 0.0) throw InvalidParameter("weighting exponent must be non-negative");
  WeightingFunction f;
  f.power_ = Power{scale, exponent};
  return f;
}

WeightingFunction WeightingFunction::custom(std::function<double(double)> fn,
                                            std::string description) {
  if (!fn) throw InvalidParameter("custom weighting function is empty");
  WeightingFunction f;
  f.custom_ = std::move(fn);
  f.description_ = std::move(description);
  return f;
}

double WeightingFunction::operator()(double gamma) const {
  if (power_) {
    if (power_->exponent == 1.0) return power_->scale * gamma;
    if (power_->exponent == 0.0) return power_->scale;
    return power_->scale * std::pow(gamma, power_->exponent);
  }
  return custom_(gamma);
}

bool WeightingFunction::is_default() const noexcept {
  return power_ && power_->scale == 2.0 && power_->exponent == 1.0;
}

std::string WeightingFunction::description() const {
  if (!power_) return description_.empty() ? "custom" : description_;
  std::ostringstream out;
  out << power_->scale;
  if (power_->exponent == 1.0) {
    out << "*g";
  } else if (power_->exponent != 0.0) {
    out << "*g^" << power_->exponent;
  }
  return out.str();
}

WeightingReport validate_weighting(const WeightingFunction& f, std::size_t grid_size) {
  if (grid_size < 2) throw InvalidParameter("weighting validation grid needs at least 2 points");

  WeightingReport report;
  double previous = 0.0;
  for (std::size_t i = 0; i < grid_size; ++i) {
    const double g = static_cast<double>(i) / static_cast<double>(grid_size - 1);
    const double value = f(g);
    if (i == 0 || value < report.min_value) report.min_value = value;
    if (i > 0) report.max_decrease = std::max(report.max_decrease, previous - value);
    previous = value;
  }
  report.non_negative = report.min_value >= 0.0;
  report.monotone = report.max_decrease <= kWeightingMonotoneSlack;

  gsl_set_error_handler_off();
  gsl_function integrand;
  integrand.function = [](double g, void* params) {
    return (*static_cast<const WeightingFunction*>(params))(g);
  };
  integrand.params = const_cast<WeightingFunction*>(&f);
  constexpr std::size_t kWorkspace = 512;
  std::unique_ptr<gsl_integration_workspace, decltype(&gsl_integration_workspace_free)> ws(
      gsl_integration_workspace_alloc(kWorkspace), &gsl_integration_workspace_free);
  double abserr = 0.0;
  const int status =
      gsl_integration_qags(&integrand, 0.0, 1.0, 1e-14, 1e-12, kWorkspace, ws.get(),
                           &report.integral, &abserr);
  report.unit_integral = status == GSL_SUCCESS && std::isfinite(report.integral) &&
                         std::abs(report.integral - 1.0) <= kWeightingIntegralTolerance;

  if (!report.non_negative) {
    std::ostringstream msg;
    msg << "negative value " << report.min_value << " on the grid";
    report.violations.push_back(msg.str());
  }
  if (!report.monotone) {
    std::ostringstream msg;
    msg << "decreases by " << report.max_decrease << " between grid points";
    report.violations.push_back(msg.str());
  }
  if (!report.unit_integral) {
    std::ostringstream msg;
    msg << "integral " << report.integral << " differs from 1 by "
        << report.integral - 1.0;
    if (status != GSL_SUCCESS) msg << " (quadrature: " << gsl_strerror(status) << ")";
    report.violations.push_back(msg.str());
  }
  return report;
}

}  // namespace possalloc

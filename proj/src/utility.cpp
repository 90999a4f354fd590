#include "possalloc/utility.hpp"

#include <cmath>
#include <sstream>

#include "possalloc/error.hpp"

namespace possalloc {
namespace {

void require_finite(double value, const char* what) {
  if (!std::isfinite(value)) throw InvalidParameter(std::string(what) + " must be finite");
}

void enforce_shape(const UtilityModel& u, const std::vector<double>& points) {
  const auto problems = shape_violations(u, points);
  if (!problems.empty()) {
    throw InvalidParameter("utility '" + u.name() + "' is not increasing and concave: " +
                           problems.front());
  }
}

double checked_ratio(double numerator, double denominator, const char* indicator, double w) {
  const double value = -numerator / denominator;
  if (denominator == 0.0 || !std::isfinite(value)) {
    std::ostringstream msg;
    msg << indicator << " is undefined at w=" << w << " (vanishing denominator)";
    throw IndicatorUndefined(msg.str());
  }
  return value;
}

}  // namespace

std::string to_string(UtilityFamily family) {
  switch (family) {
    case UtilityFamily::crra:
      return "crra";
    case UtilityFamily::hara:
      return "hara";
    case UtilityFamily::cara:
      return "cara";
    case UtilityFamily::custom:
      return "custom";
  }
  return "custom";
}

UtilityModel::UtilityModel(UtilityFamily family, std::string name, Evaluator evaluator,
                           WealthDomain domain, Parameters parameters)
    : family_(family),
      name_(std::move(name)),
      evaluator_(std::move(evaluator)),
      domain_(domain),
      parameters_(std::move(parameters)) {}

UtilityModel UtilityModel::crra(double a) {
  require_finite(a, "crra a");
  if (a == 0.0) throw InvalidParameter("crra requires a != 0");
  if (a >= 1.0) throw InvalidParameter("crra requires a < 1 (a = 1 is the log boundary, a > 1 is convex)");
  auto evaluator = [a](double w) {
    Derivatives d{};
    d[0] = std::pow(w, a) / a;
    double coefficient = 1.0;
    for (int n = 1; n <= kMaxOrder; ++n) {
      d[n] = coefficient * std::pow(w, a - n);
      coefficient *= a - n;
    }
    return d;
  };
  std::ostringstream name;
  name << "crra(a=" << a << ")";
  return {UtilityFamily::crra, name.str(), evaluator, WealthDomain{0.0}, CrraParameters{a}};
}

UtilityModel UtilityModel::hara(double zeta, double delta, double gamma) {
  require_finite(zeta, "hara zeta");
  require_finite(delta, "hara delta");
  require_finite(gamma, "hara gamma");
  if (gamma == 0.0 || gamma == 1.0) throw InvalidParameter("hara requires gamma not in {0, 1}");
  if (!(zeta * (1.0 - gamma) / gamma > 0.0)) {
    throw InvalidParameter("hara requires zeta (1 - gamma) / gamma > 0 for an increasing utility");
  }
  // delta + w / gamma > 0
  WealthDomain domain;
  if (gamma > 0.0) {
    domain.lower = -gamma * delta;
  } else {
    domain.upper = -gamma * delta;
  }
  auto evaluator = [zeta, delta, gamma](double w) {
    const double base = delta + w / gamma;
    Derivatives d{};
    double coefficient = zeta;
    for (int n = 0; n <= kMaxOrder; ++n) {
      d[n] = coefficient * std::pow(base, 1.0 - gamma - n);
      coefficient *= (1.0 - gamma - n) / gamma;
    }
    return d;
  };
  std::ostringstream name;
  name << "hara(zeta=" << zeta << ", delta=" << delta << ", gamma=" << gamma << ")";
  return {UtilityFamily::hara, name.str(), evaluator, domain,
          HaraParameters{zeta, delta, gamma}};
}

UtilityModel UtilityModel::cara(double c) {
  require_finite(c, "cara c");
  if (!(c > 0.0)) throw InvalidParameter("cara requires c > 0");
  auto evaluator = [c](double w) {
    const double e = std::exp(-c * w);
    Derivatives d{};
    double coefficient = -1.0 / c;
    for (int n = 0; n <= kMaxOrder; ++n) {
      d[n] = coefficient * e;
      coefficient *= -c;
    }
    return d;
  };
  std::ostringstream name;
  name << "cara(c=" << c << ")";
  return {UtilityFamily::cara, name.str(), evaluator, WealthDomain{}, CaraParameters{c}};
}

UtilityModel UtilityModel::polynomial(std::vector<double> coefficients, WealthDomain domain,
                                      const std::vector<double>& check_points) {
  if (coefficients.empty()) throw InvalidParameter("polynomial utility needs coefficients");
  for (double c : coefficients) require_finite(c, "polynomial coefficient");
  auto evaluator = [coefficients](double w) {
    Derivatives d{};
    std::vector<double> current = coefficients;
    for (int n = 0; n <= kMaxOrder; ++n) {
      double value = 0.0;
      for (auto it = current.rbegin(); it != current.rend(); ++it) value = value * w + *it;
      d[n] = value;
      if (current.size() <= 1) {
        current.assign(1, 0.0);
        continue;
      }
      std::vector<double> next(current.size() - 1);
      for (std::size_t i = 1; i < current.size(); ++i) next[i - 1] = static_cast<double>(i) * current[i];
      current = std::move(next);
    }
    return d;
  };
  std::ostringstream name;
  name << "polynomial(";
  for (std::size_t i = 0; i < coefficients.size(); ++i) name << (i ? ", " : "") << coefficients[i];
  name << ")";
  UtilityModel u{UtilityFamily::custom, name.str(), evaluator, domain,
                 PolynomialParameters{std::move(coefficients)}};
  enforce_shape(u, check_points);
  return u;
}

UtilityModel UtilityModel::custom(std::string name, Evaluator evaluator, WealthDomain domain,
                                  const std::vector<double>& check_points) {
  if (!evaluator) throw InvalidParameter("custom utility needs a derivative evaluator");
  UtilityModel u{UtilityFamily::custom, std::move(name), std::move(evaluator), domain,
                 OpaqueParameters{}};
  enforce_shape(u, check_points);
  return u;
}

UtilityModel::Derivatives UtilityModel::at(double w) const {
  if (!domain_.contains(w)) {
    std::ostringstream msg;
    msg << "wealth " << w << " outside the domain (" << domain_.lower << ", " << domain_.upper
        << ") of " << name_;
    throw DomainError(msg.str());
  }
  return evaluator_(w);
}

double UtilityModel::derivative(int order, double w) const {
  if (order < 0 || order > kMaxOrder) throw InvalidParameter("derivative order must be in [0, 4]");
  return at(w)[static_cast<std::size_t>(order)];
}

std::vector<double> derivatives(const UtilityModel& u, double w, int order) {
  if (order < 0 || order > UtilityModel::kMaxOrder) {
    throw InvalidParameter("derivative order must be in [0, 4]");
  }
  const auto all = u.at(w);
  return {all.begin(), all.begin() + order + 1};
}

std::vector<std::string> shape_violations(const UtilityModel& u, const std::vector<double>& wealth) {
  std::vector<std::string> problems;
  for (double w : wealth) {
    std::ostringstream msg;
    if (!u.in_domain(w)) {
      msg << "w=" << w << " outside the domain";
      problems.push_back(msg.str());
      continue;
    }
    const auto d = u.at(w);
    if (!(d[1] > 0.0)) {
      msg << "u'(" << w << ") = " << d[1] << " is not positive";
      problems.push_back(msg.str());
    } else if (d[2] > 0.0) {
      msg << "u''(" << w << ") = " << d[2] << " is positive";
      problems.push_back(msg.str());
    }
  }
  return problems;
}

double risk_aversion(const UtilityModel& u, double w) {
  const auto d = u.at(w);
  return checked_ratio(d[2], d[1], "risk aversion", w);
}

double prudence(const UtilityModel& u, double w) {
  const auto d = u.at(w);
  return checked_ratio(d[3], d[2], "prudence", w);
}

double temperance(const UtilityModel& u, double w) {
  const auto d = u.at(w);
  return checked_ratio(d[4], d[3], "temperance", w);
}

RiskIndicators indicators(const UtilityModel& u, double w) {
  return {risk_aversion(u, w), prudence(u, w), temperance(u, w)};
}

IndicatorRatios indicator_ratios(const UtilityModel& u, double w) {
  const auto ind = indicators(u, w);
  const double r = ind.risk_aversion;
  const double p = ind.prudence;
  if (r == 0.0) throw IndicatorUndefined("indicator ratios need non-zero risk aversion");
  if (p == 0.0) throw IndicatorUndefined("temperance ratio needs non-zero prudence");
  const double r3 = r * r * r;
  return {1.0 / r, p / (r * r), p * p / r3, ind.temperance / (p * r3), ind.temperance * p / r3};
}

}  // namespace possalloc

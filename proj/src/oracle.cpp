#include "possalloc/oracle.hpp"

#include <gsl/gsl_poly.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace possalloc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kConcavitySamples = 21;

double binomial(int n, int k) {
  double result = 1.0;
  for (int i = 1; i <= k; ++i) result = result * (n - k + i) / i;
  return result;
}

double ipow(double x, int p) {
  double result = 1.0;
  for (int i = 0; i < p; ++i) result *= x;
  return result;
}

void require_feasible(const PortfolioModel& m, double alpha) {
  const auto range = feasible_allocations(m);
  if (range.contains(alpha)) return;
  const auto support = m.risk().support();
  const auto& domain = m.utility().domain();
  std::ostringstream msg;
  for (double x : {support.lower, support.upper}) {
    const double wealth = m.wealth() + alpha * (m.excess_mean() + x);
    if (!domain.contains(wealth)) {
      msg << "allocation " << alpha << " puts wealth " << wealth << " at support endpoint x=" << x
          << " outside the domain of " << m.utility().name();
      throw DomainError(msg.str());
    }
  }
  msg << "allocation " << alpha << " outside the feasible range (" << range.lower << ", "
      << range.upper << ")";
  throw DomainError(msg.str());
}

}  // namespace

void FocSolverConfig::validate() const {
  if (!(bracket_init > 0.0)) throw InvalidParameter("bracket_init must be positive");
  if (!(bracket_growth > 1.0)) throw InvalidParameter("bracket_growth must exceed 1");
  if (max_expansions < 1) throw InvalidParameter("max_expansions must be at least 1");
  if (!(root_tolerance > 0.0)) throw InvalidParameter("root_tolerance must be positive");
  if (max_iterations < 1) throw InvalidParameter("max_iterations must be at least 1");
}

AllocationRange feasible_allocations(const PortfolioModel& m) {
  AllocationRange range{-kInf, kInf};
  const auto support = m.risk().support();
  const auto& domain = m.utility().domain();
  const double w = m.wealth();
  for (double x : {support.lower, support.upper}) {
    const double slope = m.excess_mean() + x;
    if (slope == 0.0) continue;
    // domain.lower < w + alpha * slope < domain.upper
    double a = (domain.lower - w) / slope;
    double b = (domain.upper - w) / slope;
    if (slope < 0.0) std::swap(a, b);
    if (std::isnan(a)) a = -kInf;
    if (std::isnan(b)) b = kInf;
    range.lower = std::max(range.lower, a);
    range.upper = std::min(range.upper, b);
  }
  return range;
}

double total_utility(const PortfolioModel& m, double alpha) {
  require_feasible(m, alpha);
  const double w = m.wealth();
  const double s = m.excess_mean();
  const auto& u = m.utility();
  return m.op()(m.risk(), [&](double x) { return u.value(w + alpha * (s + x)); });
}

double v_prime(const PortfolioModel& m, double alpha) {
  require_feasible(m, alpha);
  const double w = m.wealth();
  const double s = m.excess_mean();
  const auto& u = m.utility();
  return m.op()(m.risk(), [&](double x) { return (s + x) * u.derivative(1, w + alpha * (s + x)); });
}

double v_doubleprime(const PortfolioModel& m, double alpha) {
  require_feasible(m, alpha);
  const double w = m.wealth();
  const double s = m.excess_mean();
  const auto& u = m.utility();
  return m.op()(m.risk(), [&](double x) {
    const double y = s + x;
    return y * y * u.derivative(2, w + alpha * y);
  });
}

OracleResult solve_foc(const PortfolioModel& m, const FocSolverConfig& config) {
  config.validate();
  OracleResult result;
  const auto range = feasible_allocations(m);
  auto record = [&](double alpha) {
    const double slope = v_prime(m, alpha);
    result.trace.emplace_back(alpha, slope);
    return slope;
  };

  const double slope_at_zero = m.k() == 0.0 ? 0.0 : record(0.0);
  if (slope_at_zero == 0.0) {
    result.alpha_star = 0.0;
    result.foc_residual = 0.0;
  } else {
    // Walk away from 0 in the uphill direction until V' changes sign.
    const double direction = slope_at_zero > 0.0 ? 1.0 : -1.0;
    const double limit = direction > 0.0 ? range.upper : -range.lower;
    double near = 0.0;  // |alpha| with V' of the same sign as at 0
    double far = 0.0;
    double step = config.bracket_init;
    bool bracketed = false;
    for (int i = 0; i < config.max_expansions && !bracketed; ++i) {
      double candidate = near + step;
      if (!(candidate < limit)) {
        candidate = near + 0.5 * (limit - near);
        ++result.boundary_shrinks;
      } else {
        step *= config.bracket_growth;
      }
      ++result.expansions;
      double slope = 0.0;
      try {
        slope = record(direction * candidate);
      } catch (const DomainError&) {
        std::ostringstream msg;
        msg << "V' keeps the sign of V'(0) = " << slope_at_zero
            << " up to the edge of the feasible range (" << range.lower << ", " << range.upper
            << ")";
        throw NoInteriorOptimum(msg.str());
      }
      if (slope == 0.0) {
        near = far = candidate;
        bracketed = true;
      } else if ((slope > 0.0) != (direction > 0.0)) {
        far = candidate;
        bracketed = true;
      } else {
        near = candidate;
      }
    }
    if (!bracketed) {
      std::ostringstream msg;
      msg << "V' keeps the sign of V'(0) = " << slope_at_zero << " up to alpha = "
          << direction * near << " (feasible range (" << range.lower << ", " << range.upper
          << "))";
      throw NoInteriorOptimum(msg.str());
    }

    // Bisection on [near, far] in |alpha|; V' has the sign of V'(0) at near.
    while (far - near > 0.0 && result.iterations < config.max_iterations) {
      const double mid = 0.5 * (near + far);
      if (mid <= near || mid >= far) break;
      ++result.iterations;
      const double slope = record(direction * mid);
      if (slope == 0.0) {
        near = far = mid;
      } else if ((slope > 0.0) == (direction > 0.0)) {
        near = mid;
      } else {
        far = mid;
      }
    }
    const double a = direction * near;
    const double b = direction * far;
    const double fa = v_prime(m, a);
    const double fb = v_prime(m, b);
    result.alpha_star = std::abs(fa) <= std::abs(fb) ? a : b;
    result.foc_residual = std::abs(fa) <= std::abs(fb) ? fa : fb;
    if (!(std::abs(result.foc_residual) <= config.root_tolerance)) {
      std::ostringstream msg;
      msg << "bisection stopped at alpha = " << result.alpha_star << " with |V'| = "
          << std::abs(result.foc_residual) << " above the tolerance " << config.root_tolerance;
      throw EvaluationError(msg.str());
    }
  }
  result.v_at_star = total_utility(m, result.alpha_star);

  // Sample V'' over [0, alpha*] widened by a quarter on each side, inside the domain.
  const double span = std::max(std::abs(result.alpha_star), 1e-3);
  double lo = std::min(0.0, result.alpha_star) - 0.25 * span;
  double hi = std::max(0.0, result.alpha_star) + 0.25 * span;
  if (!(lo > range.lower)) lo = 0.5 * (std::min(0.0, result.alpha_star) + range.lower);
  if (!(hi < range.upper)) hi = 0.5 * (std::max(0.0, result.alpha_star) + range.upper);
  result.concavity_certificate = -kInf;
  for (int i = 0; i < kConcavitySamples; ++i) {
    const double alpha = lo + (hi - lo) * i / (kConcavitySamples - 1);
    result.concavity_certificate = std::max(result.concavity_certificate, v_doubleprime(m, alpha));
  }
  return result;
}

double shifted_moment(const PortfolioModel& m, int power, double k) {
  if (power < 0) throw InvalidParameter("moment power must be non-negative");
  const double s = k * m.mu();
  double total = 0.0;
  for (int i = 0; i <= power; ++i) {
    const double raw = i == 0 ? 1.0 : moment(m.op(), m.risk(), i);
    total += binomial(power, i) * ipow(s, power - i) * raw;
  }
  return total;
}

double shifted_moment_direct(const PortfolioModel& m, int power, double k) {
  if (power < 0) throw InvalidParameter("moment power must be non-negative");
  const double s = k * m.mu();
  return m.op()(m.risk(), [&](double x) { return ipow(s + x, power); });
}

PolynomialFoc polynomial_foc(const PortfolioModel& m, int n, double k,
                             std::optional<double> reference) {
  if (n < 1 || n > 3) throw InvalidParameter("polynomial first-order condition needs 1 <= n <= 3");
  if (k < 0.0) throw InvalidParameter("k must be non-negative");

  PolynomialFoc out;
  const auto u = m.utility().at(m.wealth());
  double factorial = 1.0;
  for (int j = 0; j <= n; ++j) {
    if (j > 0) factorial *= j;
    out.coefficients.push_back(u[static_cast<std::size_t>(j + 1)] / factorial *
                               shifted_moment(m, j + 1, k));
  }

  // Drop leading coefficients that are negligible against the rest.
  const auto& c = out.coefficients;
  double scale = 0.0;
  for (double v : c) scale = std::max(scale, std::abs(v));
  int degree = n;
  while (degree > 0 && std::abs(c[static_cast<std::size_t>(degree)]) <= 1e-14 * scale) --degree;

  std::array<double, 3> roots{};
  int count = 0;
  switch (degree) {
    case 0:
      break;
    case 1:
      roots[0] = -c[0] / c[1];
      count = 1;
      break;
    case 2:
      count = gsl_poly_solve_quadratic(c[2], c[1], c[0], &roots[0], &roots[1]);
      break;
    default:
      count = gsl_poly_solve_cubic(c[2] / c[3], c[1] / c[3], c[0] / c[3], &roots[0], &roots[1],
                                   &roots[2]);
      break;
  }
  out.roots.assign(roots.begin(), roots.begin() + count);
  std::sort(out.roots.begin(), out.roots.end());

  if (!reference) {
    try {
      reference = solve_foc(m.with_k(k)).alpha_star;
    } catch (const Error&) {
      reference = std::nullopt;
    }
  }
  if (reference && !out.roots.empty()) {
    const auto nearest = std::min_element(out.roots.begin(), out.roots.end(), [&](double a, double b) {
      return std::abs(a - *reference) < std::abs(b - *reference);
    });
    out.principal = static_cast<std::size_t>(nearest - out.roots.begin());
  }
  return out;
}

std::vector<double> divided_differences(std::span<const double> x, std::span<const double> y,
                                        int order) {
  if (x.size() != y.size()) throw InvalidParameter("divided differences need equal-length samples");
  if (order < 0 || static_cast<std::size_t>(order) >= x.size()) {
    throw InvalidParameter("divided-difference order must be below the sample count");
  }
  std::vector<double> table(y.begin(), y.end());
  for (int level = 1; level <= order; ++level) {
    for (std::size_t i = 0; i + level < x.size(); ++i) {
      table[i] = (table[i + 1] - table[i]) / (x[i + level] - x[i]);
    }
    table.pop_back();
  }
  return table;
}

}  // namespace possalloc

#include "possalloc/verification.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "possalloc/allocation.hpp"
#include "possalloc/benchmark.hpp"

namespace possalloc {
namespace {

constexpr double kAxiomTolerance = 1e-9;
constexpr double kConstancyTolerance = 1e-12;
constexpr double kMonotoneSlack = 1e-12;
constexpr double kD2Tolerance = 1e-6;
constexpr double kConcavityTolerance = 1e-9;
constexpr double kChainTolerance = 1e-9;
constexpr int kConcavityGrid = 41;

CheckResult run(const std::string& name, double tolerance,
                const std::function<void(CheckResult&)>& body) {
  CheckResult c;
  c.name = name;
  c.tolerance = tolerance;
  try {
    body(c);
  } catch (const std::exception& e) {
    c.passed = false;
    c.residual = std::numeric_limits<double>::quiet_NaN();
    c.detail = e.what();
  }
  return c;
}

void finish(CheckResult& c, double residual) {
  c.residual = residual;
  c.passed = std::isfinite(residual) && residual <= c.tolerance;
}

struct Parametric {
  const char* name;
  ParametricFunction g;
  ParametricFunction dg;
};

std::vector<Parametric> d2_battery() {
  return {
      {"exp", [](double x, double l) { return std::exp(l * x); },
       [](double x, double l) { return x * std::exp(l * x); }},
      {"sin", [](double x, double l) { return std::sin(l * x + x * x); },
       [](double x, double l) { return x * std::cos(l * x + x * x); }},
      {"rational", [](double x, double l) { return 1.0 / (1.0 + l * l * x * x); },
       [](double x, double l) {
         const double d = 1.0 + l * l * x * x;
         return -2.0 * l * x * x / (d * d);
       }},
      {"polynomial", [](double x, double l) { return l * l * l * x * x + l * x; },
       [](double x, double l) { return 3.0 * l * l * x * x + x; }},
  };
}

// Allocations spanning 90% of the feasible range, clipped to [-w0, w0].
std::vector<double> alpha_grid(const PortfolioModel& m) {
  const auto range = feasible_allocations(m);
  const double w0 = m.initial_wealth();
  const double lo = 0.9 * std::max(range.lower, -w0);
  const double hi = 0.9 * std::min(range.upper, w0);
  std::vector<double> grid(kConcavityGrid);
  for (int i = 0; i < kConcavityGrid; ++i) {
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / (kConcavityGrid - 1);
  }
  return grid;
}

}  // namespace

bool VerificationReport::passed() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

VerificationReport verify_model(const PortfolioModel& m, const FocSolverConfig& solver,
                                std::string label) {
  VerificationReport report;
  report.label = std::move(label);
  auto& out = report.checks;
  const auto& op = m.op();
  const auto& a = m.risk();

  out.push_back(run("weighting", kWeightingIntegralTolerance, [&](CheckResult& c) {
    const auto w = validate_weighting(op.weighting());
    c.residual = w.integral_residual();
    c.passed = w.valid();
    std::ostringstream msg;
    for (const auto& v : w.violations) msg << (msg.tellp() > 0 ? "; " : "") << v;
    c.detail = msg.str();
  }));

  out.push_back(run("centering", kCenteringTolerance, [&](CheckResult& c) {
    finish(c, std::abs(expected_value(op.weighting(), a, op.quadrature().outer_nodes)));
  }));

  out.push_back(run("axiom-a", kAxiomTolerance, [&](CheckResult& c) {
    const double lhs = op(a, [](double x) { return x; });
    finish(c, std::abs(lhs - expected_value(op.weighting(), a, op.quadrature().outer_nodes)));
  }));

  out.push_back(run("axiom-b", kConstancyTolerance, [&](CheckResult& c) {
    double worst = 0.0;
    for (double value : {-3.5, 0.0, 1.0, 7.0}) {
      worst = std::max(worst, std::abs(op(a, [value](double) { return value; }) - value));
    }
    finish(c, worst);
  }));

  out.push_back(run("axiom-c", kAxiomTolerance, [&](CheckResult& c) {
    const auto g = [](double x) { return x * x * x - 2.0 * x; };
    const auto h = [](double x) { return x * x + 1.0; };
    const double s = 1.7;
    const double t = -0.6;
    const double lhs = op(a, [&](double x) { return s * g(x) + t * h(x); });
    finish(c, std::abs(lhs - s * op(a, g) - t * op(a, h)));
  }));

  out.push_back(run("axiom-d", kMonotoneSlack, [&](CheckResult& c) {
    const double lo = a.support().lower;
    const auto g = [](double x) { return x * x - x; };
    const auto h = [&](double x) { return x * x - x + (x - lo) * (x - lo); };
    finish(c, std::max(0.0, op(a, g) - op(a, h)));
  }));

  out.push_back(run("d2-battery", kD2Tolerance, [&](CheckResult& c) {
    double worst = 0.0;
    std::string where;
    for (const auto& p : d2_battery()) {
      const double r = check_d_property(op, a, p.g, p.dg, 0.3, 1e-5);
      if (r > worst) {
        worst = r;
        where = p.name;
      }
    }
    finish(c, worst);
    if (!where.empty()) c.detail = "worst: " + where;
  }));

  const auto grid = alpha_grid(m);

  out.push_back(run("utility-shape", 0.0, [&](CheckResult& c) {
    const auto support = a.support();
    const double w = m.wealth();
    const double s = m.excess_mean();
    std::vector<double> wealth;
    for (double alpha : grid) {
      wealth.push_back(w + alpha * (s + support.lower));
      wealth.push_back(w + alpha * (s + support.upper));
    }
    const auto violations = shape_violations(m.utility(), wealth);
    c.residual = static_cast<double>(violations.size());
    c.passed = violations.empty();
    if (!violations.empty()) c.detail = violations.front();
  }));

  out.push_back(run("concavity", kConcavityTolerance, [&](CheckResult& c) {
    double worst = -std::numeric_limits<double>::infinity();
    double at = 0.0;
    for (double alpha : grid) {
      const double v2 = v_doubleprime(m, alpha);
      if (v2 > worst) {
        worst = v2;
        at = alpha;
      }
    }
    finish(c, worst);
    std::ostringstream msg;
    msg << "max V'' at alpha = " << at;
    c.detail = msg.str();
  }));

  out.push_back(run("model-d2", kD2Tolerance, [&](CheckResult& c) {
    double worst = 0.0;
    for (double alpha : {grid[kConcavityGrid / 4], grid[kConcavityGrid / 2],
                         grid[3 * kConcavityGrid / 4]}) {
      const double h = 1e-4 * std::max(1.0, std::abs(alpha));
      const double fd = (total_utility(m, alpha + h) - total_utility(m, alpha - h)) / (2.0 * h);
      const double exact = v_prime(m, alpha);
      worst = std::max(worst, std::abs(fd - exact) / std::max(1.0, std::abs(exact)));
    }
    finish(c, worst);
  }));

  out.push_back(run("foc-solve", solver.root_tolerance, [&](CheckResult& c) {
    const auto r = solve_foc(m, solver);
    finish(c, std::abs(r.foc_residual));
    std::ostringstream msg;
    msg << "alpha* = " << r.alpha_star;
    c.detail = msg.str();
  }));

  out.push_back(run("order3-chain-vs-fterms", kChainTolerance, [&](CheckResult& c) {
    const auto r = allocate(m);
    finish(c, std::abs(r.alpha_order3 - r.alpha_order3_fterms) /
                  std::max(1.0, std::abs(r.alpha_order3)));
  }));

  return report;
}

std::vector<VerificationReport> verify_benchmark(const FocSolverConfig& solver) {
  std::vector<VerificationReport> reports;
  for (const auto& b : benchmark_models()) reports.push_back(verify_model(b.model, solver, b.label));
  return reports;
}

}  // namespace possalloc

#pragma once

#include <string>
#include <vector>

#include "possalloc/oracle.hpp"

namespace possalloc {

struct CheckResult {
  std::string name;
  bool passed = false;
  double residual = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct VerificationReport {
  std::string label;
  std::vector<CheckResult> checks;

  [[nodiscard]] bool passed() const noexcept;
};

/// Runs the invariant checks on one model: weighting validity, centering,
/// operator axioms (a)-(d), the D2 battery, utility shape, concavity of V,
/// model-level D2, the FOC solve and chain vs F-term agreement of the
/// third-order allocation. A check that throws is recorded as failed.
[[nodiscard]] VerificationReport verify_model(const PortfolioModel& m,
                                              const FocSolverConfig& solver = {},
                                              std::string label = "model");

/// verify_model over benchmark_models().
[[nodiscard]] std::vector<VerificationReport> verify_benchmark(const FocSolverConfig& solver = {});

}  // namespace possalloc

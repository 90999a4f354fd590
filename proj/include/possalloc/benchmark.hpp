#pragma once

#include <string>
#include <vector>

#include "possalloc/model.hpp"

namespace possalloc {

struct BenchmarkModel {
  std::string label;
  PortfolioModel model;
};

/// Ten fixed concave models covering CRRA, HARA and CARA utilities, both
/// operators, three weightings and triangular as well as tabulated risks.
/// All are built at k = 0.1.
[[nodiscard]] std::vector<BenchmarkModel> benchmark_models();

}  // namespace possalloc

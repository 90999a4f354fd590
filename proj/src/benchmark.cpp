#include "possalloc/benchmark.hpp"

#include <cmath>

namespace possalloc {
namespace {

constexpr double kBenchmarkK = 0.1;

BenchmarkModel make(std::string label, double w0, double r, double mu, const FuzzyNumber& shape,
                    UtilityModel utility, OperatorKind kind,
                    WeightingFunction weighting = WeightingFunction::linear()) {
  EUOperator op(kind, weighting);
  auto risk = centered(shape, weighting);
  return {std::move(label),
          PortfolioModel(w0, r, kBenchmarkK, mu, std::move(risk), std::move(utility), std::move(op))};
}

// Asymmetric endpoints with curvature in gamma; tabulated on the default grid.
FuzzyNumber curved_risk() {
  return FuzzyNumber::tabulate(FuzzyNumber::from_endpoints([](double g) {
    const double open = 1.0 - g;
    return LevelInterval{-1.5 * open * open - 0.5 * open, 2.5 * open - 0.5 * open * open};
  }));
}

}  // namespace

std::vector<BenchmarkModel> benchmark_models() {
  std::vector<BenchmarkModel> models;
  models.push_back(make("crra-symmetric-T1", 100.0, 0.0, 1.0, FuzzyNumber::triangular(0, 2, 2),
                        UtilityModel::crra(0.5), OperatorKind::T1));
  models.push_back(make("crra-negative-a-T1", 50.0, 0.02, 0.8, FuzzyNumber::triangular(0, 1, 3),
                        UtilityModel::crra(-1.0), OperatorKind::T1));
  models.push_back(make("crra-left-skew-T2", 80.0, 0.01, 0.3, FuzzyNumber::triangular(0, 3, 1),
                        UtilityModel::crra(-0.5), OperatorKind::T2));
  models.push_back(make("hara-T1", 60.0, 0.0, 0.3, FuzzyNumber::triangular(0, 2, 2.5),
                        UtilityModel::hara(-1.0, 2.0, 3.0), OperatorKind::T1));
  models.push_back(make("hara-T2", 40.0, 0.03, 1.0, FuzzyNumber::triangular(0, 1.5, 0.5),
                        UtilityModel::hara(-1.0, 0.5, 5.0), OperatorKind::T2));
  models.push_back(make("cara-T1", 100.0, 0.0, 1.0, FuzzyNumber::triangular(0, 2, 4),
                        UtilityModel::cara(0.05), OperatorKind::T1));
  models.push_back(make("cara-tabulated-T1", 100.0, 0.0, 1.0, curved_risk(),
                        UtilityModel::cara(0.1), OperatorKind::T1));
  models.push_back(make("crra-uniform-weighting-T1", 100.0, 0.0, 1.0,
                        FuzzyNumber::triangular(0, 2, 3), UtilityModel::crra(0.5),
                        OperatorKind::T1, WeightingFunction::uniform()));
  models.push_back(make("crra-quadratic-weighting-T2", 70.0, 0.0, 0.15,
                        FuzzyNumber::triangular(0, 1, 2), UtilityModel::crra(-2.0),
                        OperatorKind::T2, WeightingFunction::power(3.0, 2.0)));
  models.push_back(make("hara-negative-gamma-T1", 50.0, 0.0, 1.0, FuzzyNumber::triangular(0, 2, 2),
                        UtilityModel::hara(-0.01, 100.0, -2.0), OperatorKind::T1));
  return models;
}

}  // namespace possalloc

#include "possalloc/operators.hpp"

#include <sstream>

namespace possalloc {
namespace {

double ipow(double x, int k) {
  double result = 1.0;
  for (int i = 0; i < k; ++i) result *= x;
  return result;
}

}  // namespace

std::string to_string(OperatorKind kind) { return kind == OperatorKind::T1 ? "T1" : "T2"; }

EUOperator::EUOperator(OperatorKind kind, WeightingFunction weighting,
                       QuadratureSettings quadrature)
    : kind_(kind), weighting_(std::move(weighting)), quadrature_(quadrature) {
  if (quadrature_.outer_nodes < kMinQuadratureNodes ||
      quadrature_.inner_nodes < kMinQuadratureNodes) {
    std::ostringstream msg;
    msg << "quadrature needs at least " << kMinQuadratureNodes << " nodes per direction (got "
        << quadrature_.outer_nodes << ", " << quadrature_.inner_nodes << ")";
    throw InvalidParameter(msg.str());
  }
  GaussLegendre outer(quadrature_.outer_nodes);
  std::vector<double> weights(outer.size());
  for (std::size_t i = 0; i < outer.size(); ++i) {
    weights[i] = outer.weights()[i] * weighting_(outer.nodes()[i]);
  }
  rules_ = std::make_shared<const Rules>(
      Rules{std::move(outer), GaussLegendre(quadrature_.inner_nodes), std::move(weights)});
}

double expected_value(const WeightingFunction& f, const FuzzyNumber& a, std::size_t nodes) {
  const GaussLegendre rule(nodes);
  const double value =
      rule.integrate([&](double g) { return a.level_set(g).midpoint() * f(g); });
  if (!std::isfinite(value)) throw EvaluationError("expected value is not finite");
  return value;
}

FuzzyNumber centered(const FuzzyNumber& a, const WeightingFunction& f, std::size_t nodes) {
  // A shift by c moves the quadrature mean by c times the quadrature mass of f.
  const GaussLegendre rule(nodes);
  const double mass = rule.integrate([&](double g) { return f(g); });
  if (!(mass > 0.0)) throw InvalidParameter("weighting function has no mass");
  return a.shifted(-expected_value(f, a, nodes) / mass);
}

double moment(const EUOperator& op, const FuzzyNumber& a, int k) {
  if (k < 1) throw InvalidParameter("moment order must be at least 1");
  return op(a, [k](double x) { return ipow(x, k); });
}

MomentSet central_moments(const EUOperator& op, const FuzzyNumber& a) {
  MomentSet m;
  m.expected_value = expected_value(op.weighting(), a, op.quadrature().outer_nodes);
  const double e = m.expected_value;
  m.variance = op(a, [e](double x) { return ipow(x - e, 2); });
  m.skewness = op(a, [e](double x) { return ipow(x - e, 3); });
  m.kurtosis = op(a, [e](double x) { return ipow(x - e, 4); });
  m.m2 = moment(op, a, 2);
  m.m3 = moment(op, a, 3);
  m.m4 = moment(op, a, 4);
  return m;
}

MomentSet triangular_closed_moments(const TriangularShape& shape, const EUOperator& op) {
  if (op.kind() != OperatorKind::T1 || !op.weighting().is_default()) {
    throw UnsupportedConfiguration(
        "closed-form triangular moments exist only for T1 with weighting f(g) = 2g");
  }
  return triangular_closed_moments(shape.peak, shape.left_spread, shape.right_spread);
}

MomentSet triangular_closed_moments(double peak, double left_spread, double right_spread) {
  if (left_spread < 0.0 || right_spread < 0.0) {
    throw InvalidParameter("triangular spreads must be non-negative");
  }
  const double l = left_spread;
  const double r = right_spread;
  MomentSet m;
  m.expected_value = peak + (r - l) / 6.0;
  m.variance = (l * l + r * r + l * r) / 18.0;
  m.skewness = 19.0 * (r * r * r - l * l * l) / 1080.0 + l * r * (r - l) / 72.0;
  m.kurtosis = r * r * l * l / 72.0 + 5.0 * (ipow(l, 4) + ipow(r, 4)) / 432.0 +
               2.0 * l * r * (l * l + r * r) / 135.0;

  // Raw moments by binomial expansion around E; T(A, x - E) = 0.
  const double e = m.expected_value;
  m.m2 = m.variance + e * e;
  m.m3 = m.skewness + 3.0 * e * m.variance + e * e * e;
  m.m4 = m.kurtosis + 4.0 * e * m.skewness + 6.0 * e * e * m.variance + ipow(e, 4);
  return m;
}

double check_d_property(const EUOperator& op, const FuzzyNumber& a, const ParametricFunction& g,
                        const ParametricFunction& dg_dlambda, double lambda0, double step) {
  if (!(step > 0.0)) throw InvalidParameter("finite-difference step must be positive");
  const double lhs = op(a, [&](double x) { return dg_dlambda(x, lambda0); });
  const double plus = op(a, [&](double x) { return g(x, lambda0 + step); });
  const double minus = op(a, [&](double x) { return g(x, lambda0 - step); });
  const double rhs = (plus - minus) / (2.0 * step);
  const double residual = std::abs(lhs - rhs);
  if (!std::isfinite(residual)) throw EvaluationError("D-property residual is not finite");
  return residual;
}

}  // namespace possalloc

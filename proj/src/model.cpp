#include "possalloc/model.hpp"

#include <cmath>
#include <sstream>

namespace possalloc {

PortfolioModel::PortfolioModel(double w0, double r, double k, double mu, FuzzyNumber risk,
                               UtilityModel utility, EUOperator op)
    : w0_(w0),
      r_(r),
      k_(k),
      mu_(mu),
      risk_(std::move(risk)),
      utility_(std::move(utility)),
      op_(std::move(op)) {
  if (!std::isfinite(w0_) || !std::isfinite(r_) || !std::isfinite(k_) || !std::isfinite(mu_)) {
    throw InvalidParameter("model parameters w0, r, k and mu must be finite");
  }
  if (!(mu_ > 0.0)) throw InvalidParameter("mu must be positive");
  if (k_ < 0.0) throw InvalidParameter("k must be non-negative");
  if (!utility_.in_domain(wealth())) {
    std::ostringstream msg;
    msg << "wealth w = w0 (1 + r) = " << wealth() << " is outside the domain of "
        << utility_.name();
    throw InvalidParameter(msg.str());
  }
  const double mean = expected_value(op_.weighting(), risk_, op_.quadrature().outer_nodes);
  if (!(std::abs(mean) < kCenteringTolerance)) {
    std::ostringstream msg;
    msg << "risk component must satisfy E_f(A) = 0 (got " << mean << ")";
    throw InvalidParameter(msg.str());
  }
}

PortfolioModel PortfolioModel::from_return(double w0, double r, const FuzzyNumber& gross_return,
                                           UtilityModel utility, EUOperator op,
                                           std::optional<double> k, std::optional<double> mu) {
  const FuzzyNumber excess = gross_return.shifted(-r);
  const double mean = expected_value(op.weighting(), excess, op.quadrature().outer_nodes);
  double k_value = mean;
  double mu_value = 1.0;
  if (k && mu) {
    k_value = *k;
    mu_value = *mu;
  } else if (mu) {
    mu_value = *mu;
    k_value = mean / *mu;
  } else if (k) {
    if (!(*k > 0.0)) throw InvalidParameter("k must be positive to infer mu from the return");
    k_value = *k;
    mu_value = mean / *k;
  }
  if (k_value < 0.0 || !(mu_value > 0.0)) {
    std::ostringstream msg;
    msg << "excess return has possibilistic mean " << mean
        << "; the standard model needs k >= 0 and mu > 0";
    throw InvalidParameter(msg.str());
  }
  FuzzyNumber centered = excess.shifted(-k_value * mu_value);
  return {w0, r, k_value, mu_value, std::move(centered), std::move(utility), std::move(op)};
}

PortfolioModel PortfolioModel::with_k(double k) const {
  return {w0_, r_, k, mu_, risk_, utility_, op_};
}

PortfolioModel PortfolioModel::with_risk(FuzzyNumber risk) const {
  return {w0_, r_, k_, mu_, std::move(risk), utility_, op_};
}

}  // namespace possalloc

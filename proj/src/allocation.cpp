#include "possalloc/allocation.hpp"

#include <cmath>

namespace possalloc {
namespace {

// Inputs of the derivative chain: raw T-moments and raw utility derivatives.
struct ChainInputs {
  double mu;
  double m2, m3, m4;
  UtilityModel::Derivatives u;
};

struct Chain {
  double first, second, third;
};

ChainInputs chain_inputs(const PortfolioModel& m, bool need_fourth) {
  ChainInputs in{};
  in.mu = m.mu();
  in.m2 = moment(m.op(), m.risk(), 2);
  in.m3 = moment(m.op(), m.risk(), 3);
  in.m4 = need_fourth ? moment(m.op(), m.risk(), 4) : 0.0;
  in.u = m.utility().at(m.wealth());
  if (!(in.m2 > 0.0)) throw DegenerateModel("T(A, x^2) must be positive");
  if (in.u[2] == 0.0) throw DegenerateModel("risk aversion vanishes at w");
  return in;
}

double first_derivative(const ChainInputs& in) { return -in.mu * in.u[1] / (in.u[2] * in.m2); }

double second_derivative(const ChainInputs& in, double first) {
  return -(in.u[3] / in.u[2]) * (in.m3 / in.m2) * first * first;
}

double third_derivative(const ChainInputs& in, double first, double second,
                        TemperanceCoupling coupling) {
  double c = in.u[4] / in.u[2];
  if (coupling == TemperanceCoupling::as_printed) {
    if (in.u[3] == 0.0) throw IndicatorUndefined("T_u/P_u is undefined when u'''(w) = 0");
    c = in.u[4] * in.u[2] / (in.u[3] * in.u[3]);
  }
  const double u3_over_u2 = in.u[3] / in.u[2];
  const double rest = 6.0 * first * in.mu * in.mu +
                      u3_over_u2 * (3.0 * first * second * in.m3 +
                                    9.0 * in.mu * first * first * in.m2) +
                      c * first * first * first * in.m4;
  return -rest / in.m2;
}

Chain chain(const ChainInputs& in, TemperanceCoupling coupling) {
  Chain d{};
  d.first = first_derivative(in);
  d.second = second_derivative(in, d.first);
  d.third = third_derivative(in, d.first, d.second, coupling);
  return d;
}

FTerms assemble_f_terms(const MomentSet& moments, const IndicatorRatios& ratios,
                        TemperanceCoupling coupling) {
  const double v = moments.variance;
  const double s = moments.skewness;
  const double k = moments.kurtosis;
  if (!(v > 0.0)) throw DegenerateModel("Var_T(A) must be positive");
  const double v2 = v * v;
  const double v3 = v2 * v;
  const double temperance = coupling == TemperanceCoupling::product
                                ? ratios.temperance_product_ratio
                                : ratios.temperance_ratio;
  return {ratios.inverse_risk_aversion / v,
          ratios.prudence_ratio * s / v3,
          ratios.inverse_risk_aversion / v2,
          ratios.prudence_squared_ratio * s * s / (v3 * v2),
          ratios.prudence_ratio / v2,
          temperance * k / (v2 * v2)};
}

double order3_from_f_terms(const FTerms& f, double scaled_k) {
  const double x = scaled_k;
  return x * f[0] + 0.5 * x * x * f[1] -
         x * x * x * (f[2] - 0.5 * f[3] - 1.5 * f[4] + f[5] / 6.0);
}

}  // namespace

std::string to_string(TemperanceCoupling coupling) {
  return coupling == TemperanceCoupling::product ? "product" : "as_printed";
}

double alpha_prime0(const PortfolioModel& m) { return first_derivative(chain_inputs(m, false)); }

double alpha_doubleprime0(const PortfolioModel& m) {
  const auto in = chain_inputs(m, false);
  return second_derivative(in, first_derivative(in));
}

double alpha_tripleprime0(const PortfolioModel& m, TemperanceCoupling coupling) {
  return chain(chain_inputs(m, true), coupling).third;
}

double approx_order2(const PortfolioModel& m) {
  const double k = m.k();
  const auto in = chain_inputs(m, false);
  const double first = first_derivative(in);
  return k * first + 0.5 * k * k * second_derivative(in, first);
}

double approx_order3(const PortfolioModel& m, TemperanceCoupling coupling) {
  const double k = m.k();
  const auto d = chain(chain_inputs(m, true), coupling);
  return k * d.first + 0.5 * k * k * d.second + k * k * k * d.third / 6.0;
}

FTerms f_terms(const PortfolioModel& m, TemperanceCoupling coupling) {
  return assemble_f_terms(central_moments(m.op(), m.risk()), indicator_ratios(m.utility(), m.wealth()), coupling);
}

double approx_order2_fterms(const PortfolioModel& m) {
  const auto f = f_terms(m);
  const double x = m.excess_mean();
  return x * f[0] + 0.5 * x * x * f[1];
}

double approx_order3_fterms(const PortfolioModel& m, TemperanceCoupling coupling) {
  return order3_from_f_terms(f_terms(m, coupling), m.excess_mean());
}

AllocationResult allocate(const PortfolioModel& m, TemperanceCoupling coupling) {
  AllocationResult result;
  result.k = m.k();
  result.coupling = coupling;

  const auto d = chain(chain_inputs(m, true), coupling);
  const double k = m.k();
  result.alpha_prime0 = d.first;
  result.alpha_doubleprime0 = d.second;
  result.alpha_tripleprime0 = d.third;
  result.alpha_order2 = k * d.first + 0.5 * k * k * d.second;
  result.alpha_order3 = result.alpha_order2 + k * k * k * d.third / 6.0;

  auto& diag = result.diagnostics;
  diag.wealth = m.wealth();
  diag.moments = central_moments(m.op(), m.risk());
  diag.indicators = indicators(m.utility(), m.wealth());
  diag.ratios = indicator_ratios(m.utility(), m.wealth());
  result.f_terms = assemble_f_terms(diag.moments, diag.ratios, coupling);
  result.alpha_order3_fterms = order3_from_f_terms(result.f_terms, m.excess_mean());
  return result;
}

}  // namespace possalloc

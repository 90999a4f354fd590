#include <catch2/catch_amalgamated.hpp>

#include "possalloc/allocation.hpp"
#include "possalloc/oracle.hpp"
#include "support/generators.hpp"

using namespace possalloc;
using Catch::Approx;

namespace {

PortfolioModel crra_model(double a, double w, double mu, double l, double r, double k) {
  const auto risk = centered(FuzzyNumber::triangular(0, l, r), WeightingFunction::linear());
  return PortfolioModel(w, 0.0, k, mu, risk, UtilityModel::crra(a), EUOperator(OperatorKind::T1));
}

double sk_closed(double l, double r) {
  return 19.0 * (r * r * r - l * l * l) / 1080.0 + l * r * (r - l) / 72.0;
}

double k_closed(double l, double r) {
  return r * r * l * l / 72.0 + 5.0 * (l * l * l * l + r * r * r * r) / 432.0 +
         2.0 * l * r * (l * l + r * r) / 135.0;
}

double oracle_alpha(const PortfolioModel& m, double k) { return solve_foc(m.with_k(k)).alpha_star; }

}  // namespace

TEST_CASE("first derivative of the allocation") {
  const auto m = crra_model(0.5, 100, 1, 2, 2, 0.1);
  CHECK(alpha_prime0(m) == Approx(300).epsilon(1e-12));
  const auto wide = crra_model(0.5, 100, 1, 4, 4, 0.1);
  CHECK(alpha_prime0(wide) == Approx(alpha_prime0(m) / 4).epsilon(1e-12));
  CHECK(std::abs(alpha_doubleprime0(m)) < 1e-9);
}

TEST_CASE("order-2 allocation for the symmetric crra example") {
  const auto m = crra_model(0.5, 100, 1, 2, 2, 0.1);
  // 6 mu w k / ((1 - a) alpha^2)
  CHECK(approx_order2(m) == Approx(30).epsilon(1e-12));
  CHECK(approx_order2_fterms(m) == Approx(30).epsilon(1e-12));
  CHECK(approx_order2(m.with_k(0)) == 0.0);
  CHECK(approx_order3(m.with_k(0)) == 0.0);
}

TEST_CASE("second derivative for an asymmetric crra model") {
  const double l = 1;
  const double r = 2;
  const auto m = crra_model(0.5, 100, 1, l, r, 0.1);
  const double var = (l * l + r * r + l * r) / 18.0;
  CHECK(alpha_doubleprime0(m) == Approx(600 * sk_closed(l, r) / (var * var * var)).epsilon(1e-9));
}

TEST_CASE("order-2 crra allocation matches the expanded triangular form") {
  gen::Source s(31);
  for (int i = 0; i < 50; ++i) {
    const double a = s.uniform(-3, 0.9);
    if (std::abs(a) < 1e-2) continue;
    const double w = s.uniform(10, 500);
    const double mu = s.uniform(0.2, 2);
    const double l = s.uniform(0.2, 5);
    const double r = s.uniform(0.2, 5);
    const double k = s.uniform(0.001, 0.2);
    const auto m = crra_model(a, w, mu, l, r, k);
    const double sum = l * l + r * r + l * r;
    const double bracket = 57.0 * (r * r * r - l * l * l) / 10.0 + 9.0 * l * r * (r - l) / 2.0;
    const double expanded = 18.0 * k * mu * w / ((1 - a) * sum) *
                            (1.0 + k * mu * (2 - a) / (2.0 * (1 - a)) * bracket / (sum * sum));
    CHECK(approx_order2(m) == Approx(expanded).epsilon(1e-9));
  }
}

TEST_CASE("order-2 hara allocation matches the indicator form") {
  gen::Source s(41);
  for (int i = 0; i < 50; ++i) {
    const double gamma = s.coin() ? s.uniform(0.2, 6) : -s.uniform(1.5, 6);
    if (std::abs(gamma - 1) < 0.05) continue;
    const double zeta = (1 - gamma) / gamma > 0 ? 1.0 : -1.0;
    const double delta = s.uniform(0, 10);
    const double w = gamma > 0 ? s.uniform(1, 100) : s.uniform(1, -0.9 * gamma * delta + 1);
    const double l = s.uniform(0.2, 4);
    const double r = s.uniform(0.2, 4);
    const double mu = s.uniform(0.2, 2);
    const double k = 0.05;
    const auto risk = centered(FuzzyNumber::triangular(0, l, r), WeightingFunction::linear());
    const auto u = UtilityModel::hara(zeta, delta, gamma);
    if (!u.in_domain(w)) continue;
    const PortfolioModel m(w, 0, k, mu, risk, u, EUOperator(OperatorKind::T1));
    const double inv_r = delta + w / gamma;
    const double var = (l * l + r * r + l * r) / 18.0;
    const double sk = sk_closed(l, r);
    const double general = k * mu * inv_r / var +
                           0.5 * k * k * mu * mu * (gamma + 1) / gamma * inv_r * sk / (var * var * var);
    const double sum = l * l + r * r + l * r;
    const double triangular = 18 * mu * inv_r / sum * k +
                              18.0 * 18.0 * 18.0 / 2 * mu * mu * (gamma + 1) / gamma * inv_r * sk /
                                  (sum * sum * sum) * k * k;
    CHECK(approx_order2(m) == Approx(general).epsilon(1e-10));
    CHECK(approx_order2(m) == Approx(triangular).epsilon(1e-10));
  }
}

TEST_CASE("F-terms for crra and triangular risk") {
  const double a = 0.5;
  const double w = 100;
  gen::Source s(53);
  for (int i = 0; i < 20; ++i) {
    const double l = s.uniform(0.3, 4);
    const double r = s.uniform(0.3, 4);
    const auto m = crra_model(a, w, 1, l, r, 0.1);
    const double sum = l * l + r * r + l * r;
    const double sk = sk_closed(l, r);
    const double kt = k_closed(l, r);
    const double c18 = 18.0;
    const auto f = f_terms(m);
    CHECK(f[0] == Approx(w / (1 - a) * c18 / sum).epsilon(1e-9));
    CHECK(f[1] == Approx((2 - a) * w / ((1 - a) * (1 - a)) * std::pow(c18, 3) * sk / std::pow(sum, 3))
                      .epsilon(1e-9)
                      .margin(1e-9));
    CHECK(f[2] == Approx(w / (1 - a) * c18 * c18 / (sum * sum)).epsilon(1e-9));
    CHECK(f[3] == Approx((2 - a) * (2 - a) * w / std::pow(1 - a, 3) * sk * sk * std::pow(c18, 5) /
                         std::pow(sum, 5))
                      .epsilon(1e-9)
                      .margin(1e-9));
    CHECK(f[4] == Approx((2 - a) * w / ((1 - a) * (1 - a)) * c18 * c18 / (sum * sum)).epsilon(1e-9));
    CHECK(f[5] == Approx((3 - a) * (2 - a) * w / std::pow(1 - a, 3) * kt * std::pow(c18, 4) /
                         std::pow(sum, 4))
                      .epsilon(1e-9));
    const auto printed = f_terms(m, TemperanceCoupling::as_printed);
    CHECK(printed[5] == Approx((3 - a) * w * w * w / ((2 - a) * std::pow(1 - a, 3)) * kt *
                               std::pow(c18, 4) / std::pow(sum, 4))
                            .epsilon(1e-9));
  }

  const auto sym = crra_model(0.5, 100, 1, 2, 2, 0.1);
  const auto f = f_terms(sym);
  CHECK(f[0] == Approx(300));
  CHECK(std::abs(f[1]) < 1e-9);
  CHECK(std::abs(f[3]) < 1e-9);
}

TEST_CASE("third derivative reduces for symmetric risk") {
  const auto m = crra_model(0.5, 100, 1.3, 2, 2, 0.1);
  const double w = 100;
  const double r = 0.5 / w;
  const double p = 1.5 / w;
  const double t = 2.5 / w;
  const double var = 12.0 / 18;
  const double kt = k_closed(2, 2);
  const double mu = 1.3;
  const double d1 = mu / (r * var);
  CHECK(alpha_prime0(m) == Approx(d1).epsilon(1e-12));
  const auto expected = [&](double c) {
    return (-6 * d1 * mu * mu + 9 * p * mu * d1 * d1 * var - c * d1 * d1 * d1 * kt) / var;
  };
  CHECK(alpha_tripleprime0(m) == Approx(expected(t * p)).epsilon(1e-9));
  CHECK(alpha_tripleprime0(m, TemperanceCoupling::as_printed) == Approx(expected(t / p)).epsilon(1e-9));

  // Term by term: k^3/6 a'''(0) = -(k mu)^3 [F3 - 3/2 F5 + F6/6] when Sk = 0
  const auto f = f_terms(m);
  const double k = m.k();
  const double x = k * mu;
  CHECK(k * k * k / 6 * (-6 * d1 * mu * mu) / var == Approx(-x * x * x * f[2]).epsilon(1e-10));
  CHECK(k * k * k / 6 * 9 * p * mu * d1 * d1 == Approx(1.5 * x * x * x * f[4]).epsilon(1e-10));
  CHECK(k * k * k / 6 * (-t * p * d1 * d1 * d1 * kt / var) ==
        Approx(-x * x * x * f[5] / 6).epsilon(1e-10));
}

TEST_CASE("property: F-term assembly equals the derivative chain") {
  gen::Source s(61);
  for (int i = 0; i < 200; ++i) {
    const auto m = gen::model(s, s.uniform(0.001, 0.3));
    for (auto c : {TemperanceCoupling::product, TemperanceCoupling::as_printed}) {
      const double chain = approx_order3(m, c);
      CHECK(std::abs(chain - approx_order3_fterms(m, c)) <= 1e-9 * std::max(1.0, std::abs(chain)));
    }
    const double o2 = approx_order2(m);
    CHECK(std::abs(o2 - approx_order2_fterms(m)) <= 1e-9 * std::max(1.0, std::abs(o2)));
  }
}

TEST_CASE("allocate bundles chain, F-terms and diagnostics") {
  const auto m = crra_model(0.5, 100, 1, 1, 3, 0.1);
  const auto r = allocate(m);
  CHECK(r.k == 0.1);
  CHECK(r.alpha_order2 == Approx(approx_order2(m)).epsilon(1e-14));
  CHECK(r.alpha_order3 == Approx(approx_order3(m)).epsilon(1e-14));
  CHECK(r.alpha_order3_fterms == Approx(r.alpha_order3).epsilon(1e-12));
  CHECK(r.alpha_prime0 == Approx(alpha_prime0(m)));
  CHECK(r.diagnostics.wealth == 100);
  CHECK(r.diagnostics.indicators.risk_aversion == Approx(0.005));
  CHECK(r.coupling == TemperanceCoupling::product);
  CHECK(to_string(TemperanceCoupling::as_printed) == "as_printed");
}

TEST_CASE("degenerate inputs") {
  const PortfolioModel crisp(100, 0, 0.1, 1, FuzzyNumber::crisp(0), UtilityModel::crra(0.5),
                             EUOperator(OperatorKind::T1));
  CHECK_THROWS_AS(alpha_prime0(crisp), DegenerateModel);
  CHECK_THROWS_AS(allocate(crisp), DegenerateModel);

  const PortfolioModel quad(10, 0, 0.1, 1, FuzzyNumber::triangular(0, 1, 1),
                            UtilityModel::polynomial({0, 1, -0.01}, {-10, 40}, {10}),
                            EUOperator(OperatorKind::T1));
  CHECK(std::isfinite(approx_order3(quad)));
  CHECK_THROWS_AS(approx_order3(quad, TemperanceCoupling::as_printed), IndicatorUndefined);
}

TEST_CASE("derivatives agree with differences of the exact optimum") {
  gen::Source s(71);
  for (int i = 0; i < 8; ++i) {
    const auto m = gen::model(s, 0.0);
    INFO("model " << i << " " << m.utility().name() << " " << to_string(m.op().kind()));

    const double h1 = 1e-3;
    const double d1 = oracle_alpha(m, h1) / h1;
    CHECK(d1 == Approx(alpha_prime0(m)).epsilon(0.02));

    // Richardson-corrected forward differences, alpha(0) = 0.
    const double h = 5e-3;
    const double a1 = oracle_alpha(m, h);
    const double a2 = oracle_alpha(m, 2 * h);
    const double a3 = oracle_alpha(m, 3 * h);
    const double a4 = oracle_alpha(m, 4 * h);
    const double a6 = oracle_alpha(m, 6 * h);
    const double second_h = (a2 - 2 * a1) / (h * h);
    const double second_2h = (a4 - 2 * a2) / (4 * h * h);
    const double second = 2 * second_h - second_2h;
    const double scale2 = std::abs(alpha_doubleprime0(m)) + 1e-3 * std::abs(alpha_prime0(m));
    CHECK(std::abs(second - alpha_doubleprime0(m)) <= 0.05 * scale2);

    const double third_h = (a3 - 3 * a2 + 3 * a1) / (h * h * h);
    const double third_2h = (a6 - 3 * a4 + 3 * a2) / (8 * h * h * h);
    const double third = 2 * third_h - third_2h;
    CHECK(third == Approx(alpha_tripleprime0(m)).epsilon(0.10));
  }
}

TEST_CASE("the printed temperance coupling is refuted by the exact optimum") {
  const auto m = crra_model(0.5, 100, 1, 2, 2, 0.0);
  for (double k : {0.05, 0.02}) {
    const auto mk = m.with_k(k);
    const double exact = oracle_alpha(m, k);
    const double err2 = std::abs(approx_order2(mk) - exact);
    const double err_product = std::abs(approx_order3(mk) - exact);
    const double err_printed = std::abs(approx_order3(mk, TemperanceCoupling::as_printed) - exact);
    CHECK(err_product < err2 / 10);
    CHECK(err_printed > 100 * err2);
  }
}

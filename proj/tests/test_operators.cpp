#include <catch2/catch_amalgamated.hpp>

#include "possalloc/operators.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace possalloc;
using Catch::Approx;

namespace {

const EUOperator t1(OperatorKind::T1);
const EUOperator t2(OperatorKind::T2);

oracle::Endpoints endpoints_of(const FuzzyNumber& a) {
  return [a](double g) {
    const auto c = a.level_set(g);
    return std::pair{c.lower, c.upper};
  };
}

}  // namespace

TEST_CASE("T1 and T2 on basic integrands") {
  const auto a = FuzzyNumber::triangular(2, 1, 4);
  CHECK(t1(a, [](double x) { return x; }) == Approx(2.5).margin(1e-14));
  CHECK(t2(a, [](double x) { return x; }) == Approx(2.5).margin(1e-14));
  CHECK(expected_value(WeightingFunction::linear(), a) == Approx(2.5).margin(1e-14));
  CHECK(expected_value(WeightingFunction::linear(), FuzzyNumber::triangular(-1, 3, 3)) ==
        Approx(-1).margin(1e-14));
  CHECK(geu(t1, a, [](double) { return 7.0; }) == Approx(7.0).margin(1e-13));
  CHECK(geu(t2, a, [](double) { return 7.0; }) == Approx(7.0).margin(1e-13));
}

TEST_CASE("T2 of x^2 matches a dense reference") {
  const auto a = FuzzyNumber::triangular(0, 3, 3);
  const auto sq = [](double x) { return x * x; };
  const double want = oracle::t2(oracle::triangular(0, 3, 3), oracle::linear_weight, sq);
  CHECK(t2(a, sq) == Approx(want).margin(1e-8));
  // mean of x^2 over [-c, c] is c^2/3: 9/3 * 2\int y(1-y)^2 = 3/6 = 0.5
  CHECK(t2(a, sq) == Approx(0.5).margin(1e-12));
}

TEST_CASE("quadrature agrees with dense references on random inputs") {
  gen::Source s(2024);
  for (int i = 0; i < 30; ++i) {
    const auto a = gen::any_fuzzy(s);
    const auto c = gen::polynomial(s);
    const double shift = s.uniform(0.5, 2);
    const auto g = [&](double x) { return gen::horner(c, x) + std::exp(-shift * x * x); };
    const auto e = endpoints_of(a);
    // tabulated endpoints have kinks, so compare loosely there
    const double tol = a.kind() == FuzzyNumber::Kind::triangular ? 1e-9 : 1e-3;
    CHECK(t1(a, g) == Approx(oracle::t1(e, oracle::linear_weight, g)).margin(tol));
    CHECK(t2(a, g) == Approx(oracle::t2(e, oracle::linear_weight, g, 400, 200)).margin(tol));
  }
}

TEST_CASE("T2 on a crisp number evaluates g at the point") {
  const auto a = FuzzyNumber::crisp(1.5);
  CHECK(t2(a, [](double x) { return std::exp(x); }) == Approx(std::exp(1.5)).epsilon(1e-14));
}

TEST_CASE("tabulated expected value agrees with T1 of the identity") {
  gen::Source s(5);
  for (int i = 0; i < 20; ++i) {
    const auto a = gen::tabulated(s);
    CHECK(expected_value(WeightingFunction::linear(), a) ==
          Approx(t1(a, [](double x) { return x; })).margin(1e-10));
  }
}

TEST_CASE("moments") {
  CHECK(moment(t1, FuzzyNumber::triangular(0, 3, 3), 2) == Approx(1.5).margin(1e-12));
  CHECK(moment(t1, FuzzyNumber::triangular(0, 1, 1), 4) == Approx(1.0 / 15).margin(1e-12));
  CHECK(moment(t1, FuzzyNumber::triangular(2, 1, 4), 1) == Approx(2.5).margin(1e-12));
  CHECK_THROWS_AS(moment(t1, FuzzyNumber::crisp(0), 0), InvalidParameter);

  const auto sym = central_moments(t1, FuzzyNumber::triangular(1, 2, 2));
  CHECK(std::abs(sym.skewness) < 1e-10);

  const auto zero = centered(FuzzyNumber::triangular(0, 1, 3), WeightingFunction::linear());
  const auto m = central_moments(t1, zero);
  CHECK(m.m2 == Approx(m.variance).margin(1e-10));
  CHECK(m.m3 == Approx(m.skewness).margin(1e-10));
  CHECK(m.m4 == Approx(m.kurtosis).margin(1e-10));

  const auto crisp = central_moments(t2, FuzzyNumber::crisp(4));
  CHECK(crisp.variance == Approx(0).margin(1e-12));
  CHECK(crisp.kurtosis == Approx(0).margin(1e-12));
}

TEST_CASE("closed-form triangular moments") {
  const auto a = triangular_closed_moments(0, 3, 3);
  CHECK(a.variance == Approx(1.5));
  CHECK(a.skewness == 0.0);
  CHECK(triangular_closed_moments(0, 1, 1).kurtosis == Approx(1.0 / 15));

  const auto b = triangular_closed_moments(0, 1, 2);
  CHECK(b.variance == Approx(7.0 / 18));
  CHECK(b.skewness == Approx(163.0 / 1080));

  const auto q = central_moments(t1, FuzzyNumber::triangular(0, 1, 2));
  CHECK(q.variance == Approx(b.variance).margin(1e-8));
  CHECK(q.skewness == Approx(b.skewness).margin(1e-8));
  CHECK(q.kurtosis == Approx(b.kurtosis).margin(1e-8));
  CHECK(q.m3 == Approx(b.m3).margin(1e-8));

  const TriangularShape shape{0, 1, 2};
  CHECK_THROWS_AS(triangular_closed_moments(shape, t2), UnsupportedConfiguration);
  CHECK_THROWS_AS(
      triangular_closed_moments(shape, EUOperator(OperatorKind::T1, WeightingFunction::uniform())),
      UnsupportedConfiguration);
  CHECK_THROWS_AS(triangular_closed_moments(0, -1, 1), InvalidParameter);
}

TEST_CASE("property: closed forms match quadrature for random triangulars") {
  gen::Source s(99);
  for (int i = 0; i < 100; ++i) {
    const double l = s.uniform(0.1, 10);
    const double r = s.uniform(0.1, 10);
    const double peak = s.uniform(-5, 5);
    const auto c = triangular_closed_moments(peak, l, r);
    const auto q = central_moments(t1, FuzzyNumber::triangular(peak, l, r));
    CHECK(q.expected_value == Approx(c.expected_value).margin(1e-8));
    CHECK(q.variance == Approx(c.variance).margin(1e-8));
    CHECK(q.skewness == Approx(c.skewness).margin(1e-8));
    CHECK(q.kurtosis == Approx(c.kurtosis).margin(1e-8));
  }
}

TEST_CASE("property: operator axioms") {
  gen::Source s(3);
  for (const auto* op : {&t1, &t2}) {
    for (int i = 0; i < 40; ++i) {
      const auto a = gen::any_fuzzy(s);
      const auto g = gen::polynomial(s);
      const auto h = gen::polynomial(s);
      const auto eg = [&](double x) { return gen::horner(g, x); };
      const auto eh = [&](double x) { return gen::horner(h, x); };
      const double p = s.uniform(-3, 3);
      const double q = s.uniform(-3, 3);
      const double c = s.uniform(-10, 10);

      CHECK(std::abs((*op)(a, [](double x) { return x; }) -
                     expected_value(op->weighting(), a)) < 1e-9);
      CHECK(std::abs((*op)(a, [c](double) { return c; }) - c) < 1e-12);
      CHECK(std::abs((*op)(a, [&](double x) { return p * eg(x) + q * eh(x); }) - p * (*op)(a, eg) -
                     q * (*op)(a, eh)) < 1e-9);
      const double lo = a.support().lower;
      const auto above = [&](double x) { return eg(x) + (x - lo) * (x - lo) * q * q; };
      CHECK((*op)(a, eg) <= (*op)(a, above) + 1e-12);
    }
  }
}

TEST_CASE("nonnegative integrands give nonnegative variance and kurtosis") {
  gen::Source s(8);
  for (int i = 0; i < 40; ++i) {
    const auto a = gen::any_fuzzy(s);
    for (const auto* op : {&t1, &t2}) {
      const auto m = central_moments(*op, a);
      CHECK(m.variance >= -1e-12);
      CHECK(m.kurtosis >= -1e-12);
    }
  }
}

TEST_CASE("D2: differentiation commutes with the operator") {
  const auto a = FuzzyNumber::triangular(0, 1, 1);
  for (const auto* op : {&t1, &t2}) {
    CHECK(check_d_property(*op, a, [](double x, double l) { return l * x; },
                           [](double x, double) { return x; }, 0.7, 1e-4) < 1e-8);
    CHECK(check_d_property(*op, a, [](double x, double l) { return std::exp(l * x); },
                           [](double x, double l) { return x * std::exp(l * x); }, 0.3,
                           1e-5) < 1e-7);
    const auto c = centered(FuzzyNumber::triangular(0, 1, 3), op->weighting());
    CHECK(check_d_property(*op, c, [](double x, double l) { return (l + x) * (l + x); },
                           [](double x, double l) { return 2.0 * (l + x); }, 0.0, 1e-4) < 1e-8);
    // both sides equal 2 T(A, x) = 0 at lambda = 0
    CHECK(std::abs((*op)(c, [](double x) { return 2.0 * x; })) < 1e-12);
  }
  CHECK_THROWS_AS(check_d_property(t1, a, [](double x, double) { return x; },
                                   [](double, double) { return 0.0; }, 0, 0),
                  InvalidParameter);
}

TEST_CASE("quadrature settings") {
  CHECK_THROWS_AS(EUOperator(OperatorKind::T1, WeightingFunction::linear(), {4, 32}),
                  InvalidParameter);
  CHECK_THROWS_AS(EUOperator(OperatorKind::T2, WeightingFunction::linear(), {64, 7}),
                  InvalidParameter);
  const EUOperator coarse(OperatorKind::T2, WeightingFunction::linear(), {8, 8});
  const auto a = FuzzyNumber::triangular(0, 1, 2);
  // polynomial integrands of low degree are exact for any admissible rule
  CHECK(coarse(a, [](double x) { return x * x * x; }) ==
        Approx(t2(a, [](double x) { return x * x * x; })).margin(1e-13));
  CHECK(to_string(OperatorKind::T2) == "T2");
}

TEST_CASE("non-finite integrands are reported") {
  const auto a = FuzzyNumber::triangular(0, 1, 1);
  CHECK_THROWS_AS(t1(a, [](double x) { return std::log(x); }), EvaluationError);
}

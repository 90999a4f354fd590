#include "possalloc/serialization.hpp"

#include <sstream>

namespace possalloc {
namespace {

std::string join(const std::string& path, const std::string& member) {
  return path.empty() ? member : path + "." + member;
}

const json& require_member(const json& doc, const std::string& path, const char* member) {
  if (!doc.is_object()) throw ConfigError(path, "expected an object");
  const auto it = doc.find(member);
  if (it == doc.end()) throw ConfigError(join(path, member), "missing required field");
  return *it;
}

double number_at(const json& doc, const std::string& path, const char* member) {
  const auto& value = require_member(doc, path, member);
  if (!value.is_number()) throw ConfigError(join(path, member), "expected a number");
  return value.get<double>();
}

double number_or(const json& doc, const std::string& path, const char* member, double fallback) {
  if (!doc.contains(member)) return fallback;
  return number_at(doc, path, member);
}

std::optional<double> optional_number(const json& doc, const std::string& path,
                                      const char* member) {
  if (!doc.contains(member)) return std::nullopt;
  return number_at(doc, path, member);
}

std::size_t count_at(const json& doc, const std::string& path, const char* member) {
  const auto& value = require_member(doc, path, member);
  if (!value.is_number_integer() || value.get<long long>() < 0) {
    throw ConfigError(join(path, member), "expected a non-negative integer");
  }
  return value.get<std::size_t>();
}

std::vector<double> numbers_at(const json& doc, const std::string& path, const char* member) {
  const auto& value = require_member(doc, path, member);
  if (!value.is_array()) throw ConfigError(join(path, member), "expected an array of numbers");
  std::vector<double> out;
  out.reserve(value.size());
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (!value[i].is_number()) {
      throw ConfigError(join(path, member) + "[" + std::to_string(i) + "]", "expected a number");
    }
    out.push_back(value[i].get<double>());
  }
  return out;
}

std::string string_at(const json& doc, const std::string& path, const char* member) {
  const auto& value = require_member(doc, path, member);
  if (!value.is_string()) throw ConfigError(join(path, member), "expected a string");
  return value.get<std::string>();
}

// Library errors raised while building a value are reported against its path.
template <class F>
auto at_path(const std::string& path, F&& build) {
  try {
    return build();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(path, e.what());
  }
}

json bound_to_json(double v) {
  if (std::isinf(v)) return nullptr;
  return v;
}

}  // namespace

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const auto offset = std::min<std::size_t>(e.byte, text.size());
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i + 1 < offset; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::ostringstream msg;
    msg << "syntax error at line " << line << ", column " << column << ": " << e.what();
    throw ConfigError("", msg.str());
  }
}

json to_json(const FuzzyNumber& a) {
  if (const auto tri = a.triangular_shape()) {
    return {{"kind", "triangular"},
            {"a", tri->peak},
            {"alpha", tri->left_spread},
            {"beta", tri->right_spread}};
  }
  if (const auto* table = a.tabulated_endpoints()) {
    return {{"kind", "tabulated"}, {"gamma", table->gamma}, {"a1", table->lower}, {"a2", table->upper}};
  }
  return to_json(FuzzyNumber::tabulate(a));
}

FuzzyNumber fuzzy_from_json(const json& doc, const std::string& path) {
  const auto kind = string_at(doc, path, "kind");
  if (kind == "triangular") {
    const double peak = number_at(doc, path, "a");
    const double left = number_at(doc, path, "alpha");
    const double right = number_at(doc, path, "beta");
    return at_path(path, [&] { return FuzzyNumber::triangular(peak, left, right); });
  }
  if (kind == "tabulated") {
    auto gamma = numbers_at(doc, path, "gamma");
    auto lower = numbers_at(doc, path, "a1");
    auto upper = numbers_at(doc, path, "a2");
    return at_path(path, [&] {
      return FuzzyNumber::tabulated(std::move(gamma), std::move(lower), std::move(upper));
    });
  }
  throw ConfigError(join(path, "kind"), "unknown fuzzy number kind '" + kind +
                                            "' (expected triangular or tabulated)");
}

json to_json(const WeightingFunction& f) {
  if (f.is_default()) return {{"kind", "linear"}};
  if (const auto& p = f.power_parameters()) {
    if (p->scale == 1.0 && p->exponent == 0.0) return {{"kind", "uniform"}};
    return {{"kind", "power"}, {"scale", p->scale}, {"exponent", p->exponent}};
  }
  return {{"kind", "custom"}, {"description", f.description()}};
}

WeightingFunction weighting_from_json(const json& doc, const std::string& path) {
  const auto kind = string_at(doc, path, "kind");
  if (kind == "linear") return WeightingFunction::linear();
  if (kind == "uniform") return WeightingFunction::uniform();
  if (kind == "power") {
    const double scale = number_at(doc, path, "scale");
    const double exponent = number_at(doc, path, "exponent");
    return at_path(path, [&] { return WeightingFunction::power(scale, exponent); });
  }
  throw ConfigError(join(path, "kind"),
                    "unknown weighting kind '" + kind + "' (expected linear, uniform or power)");
}

json to_json(const UtilityModel& u) {
  return std::visit(
      [&](const auto& p) -> json {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, CrraParameters>) {
          return {{"family", "crra"}, {"a", p.a}};
        } else if constexpr (std::is_same_v<P, HaraParameters>) {
          return {{"family", "hara"}, {"zeta", p.zeta}, {"delta", p.delta}, {"gamma", p.gamma}};
        } else if constexpr (std::is_same_v<P, CaraParameters>) {
          return {{"family", "cara"}, {"c", p.c}};
        } else if constexpr (std::is_same_v<P, PolynomialParameters>) {
          return {{"family", "polynomial"},
                  {"coefficients", p.coefficients},
                  {"domain", {bound_to_json(u.domain().lower), bound_to_json(u.domain().upper)}}};
        } else {
          return {{"family", "custom"}, {"name", u.name()}};
        }
      },
      u.parameters());
}

UtilityModel utility_from_json(const json& doc, const std::string& path) {
  const auto family = string_at(doc, path, "family");
  if (family == "crra") {
    const double a = number_at(doc, path, "a");
    return at_path(path, [&] { return UtilityModel::crra(a); });
  }
  if (family == "hara") {
    const double zeta = number_at(doc, path, "zeta");
    const double delta = number_at(doc, path, "delta");
    const double gamma = number_at(doc, path, "gamma");
    return at_path(path, [&] { return UtilityModel::hara(zeta, delta, gamma); });
  }
  if (family == "cara") {
    const double c = number_at(doc, path, "c");
    return at_path(path, [&] { return UtilityModel::cara(c); });
  }
  if (family == "polynomial") {
    auto coefficients = numbers_at(doc, path, "coefficients");
    WealthDomain domain;
    if (doc.contains("domain")) {
      const auto& d = doc.at("domain");
      const auto where = join(path, "domain");
      if (!d.is_array() || d.size() != 2) throw ConfigError(where, "expected [lower, upper]");
      for (std::size_t i = 0; i < 2; ++i) {
        if (!d[i].is_null() && !d[i].is_number()) {
          throw ConfigError(where + "[" + std::to_string(i) + "]", "expected a number or null");
        }
      }
      if (d[0].is_number()) domain.lower = d[0].get<double>();
      if (d[1].is_number()) domain.upper = d[1].get<double>();
    }
    return at_path(path, [&] { return UtilityModel::polynomial(std::move(coefficients), domain); });
  }
  throw ConfigError(join(path, "family"), "unknown utility family '" + family +
                                              "' (expected crra, hara, cara or polynomial)");
}

EUOperator operator_from_json(const json& model_doc, const std::string& path,
                              const QuadratureOverride& override) {
  OperatorKind kind = OperatorKind::T1;
  QuadratureSettings quadrature;
  const auto op_path = join(path, "operator");
  if (model_doc.contains("operator")) {
    const auto& op = model_doc.at("operator");
    std::string name;
    if (op.is_string()) {
      name = op.get<std::string>();
    } else if (op.is_object()) {
      name = string_at(op, op_path, "kind");
      if (op.contains("outer_nodes")) quadrature.outer_nodes = count_at(op, op_path, "outer_nodes");
      if (op.contains("inner_nodes")) quadrature.inner_nodes = count_at(op, op_path, "inner_nodes");
    } else {
      throw ConfigError(op_path, "expected \"T1\", \"T2\" or an object");
    }
    if (name == "T1") {
      kind = OperatorKind::T1;
    } else if (name == "T2") {
      kind = OperatorKind::T2;
    } else {
      throw ConfigError(op_path, "unknown operator '" + name + "' (expected T1 or T2)");
    }
  }
  if (override.outer_nodes) quadrature.outer_nodes = *override.outer_nodes;
  if (override.inner_nodes) quadrature.inner_nodes = *override.inner_nodes;

  WeightingFunction weighting = WeightingFunction::linear();
  if (model_doc.contains("weighting")) {
    weighting = weighting_from_json(model_doc.at("weighting"), join(path, "weighting"));
  }
  return at_path(op_path, [&] { return EUOperator(kind, weighting, quadrature); });
}

PortfolioModel model_from_json(const json& doc, const std::string& path,
                               const QuadratureOverride& override) {
  if (!doc.is_object()) throw ConfigError(path, "expected an object");
  const double w0 = number_at(doc, path, "w0");
  const double r = number_or(doc, path, "r", 0.0);
  auto utility = utility_from_json(require_member(doc, path, "utility"), join(path, "utility"));
  auto op = operator_from_json(doc, path, override);

  if (doc.contains("return")) {
    if (doc.contains("risk")) throw ConfigError(path, "give either 'risk' or 'return', not both");
    const auto gross = fuzzy_from_json(doc.at("return"), join(path, "return"));
    const auto k = optional_number(doc, path, "k");
    const auto mu = optional_number(doc, path, "mu");
    return at_path(path, [&] {
      return PortfolioModel::from_return(w0, r, gross, std::move(utility), std::move(op), k, mu);
    });
  }
  auto risk = fuzzy_from_json(require_member(doc, path, "risk"), join(path, "risk"));
  const double k = number_or(doc, path, "k", 0.0);
  const double mu = number_or(doc, path, "mu", 1.0);
  return at_path(path, [&] {
    return PortfolioModel(w0, r, k, mu, std::move(risk), std::move(utility), std::move(op));
  });
}

json to_json(const PortfolioModel& m) {
  const auto& q = m.op().quadrature();
  return {{"w0", m.initial_wealth()},
          {"r", m.risk_free_rate()},
          {"k", m.k()},
          {"mu", m.mu()},
          {"risk", to_json(m.risk())},
          {"utility", to_json(m.utility())},
          {"operator",
           {{"kind", to_string(m.op().kind())},
            {"outer_nodes", q.outer_nodes},
            {"inner_nodes", q.inner_nodes}}},
          {"weighting", to_json(m.op().weighting())}};
}

FocSolverConfig solver_from_json(const json& doc, const std::string& path) {
  if (!doc.is_object()) throw ConfigError(path, "expected an object");
  FocSolverConfig config;
  config.bracket_init = number_or(doc, path, "bracket_init", config.bracket_init);
  config.bracket_growth = number_or(doc, path, "bracket_growth", config.bracket_growth);
  config.root_tolerance = number_or(doc, path, "root_tolerance", config.root_tolerance);
  if (doc.contains("max_expansions")) {
    config.max_expansions = static_cast<int>(count_at(doc, path, "max_expansions"));
  }
  if (doc.contains("max_iterations")) {
    config.max_iterations = static_cast<int>(count_at(doc, path, "max_iterations"));
  }
  at_path(path, [&] {
    config.validate();
    return 0;
  });
  return config;
}

json to_json(const MomentSet& m) {
  return {{"expected_value", m.expected_value},
          {"variance", m.variance},
          {"skewness", m.skewness},
          {"kurtosis", m.kurtosis},
          {"m2", m.m2},
          {"m3", m.m3},
          {"m4", m.m4}};
}

json to_json(const RiskIndicators& r) {
  return {{"risk_aversion", r.risk_aversion},
          {"prudence", r.prudence},
          {"temperance", r.temperance}};
}

json to_json(const IndicatorRatios& r) {
  return {{"inverse_risk_aversion", r.inverse_risk_aversion},
          {"prudence_ratio", r.prudence_ratio},
          {"prudence_squared_ratio", r.prudence_squared_ratio},
          {"temperance_ratio", r.temperance_ratio},
          {"temperance_product_ratio", r.temperance_product_ratio}};
}

json to_json(const AllocationResult& r) {
  return {{"k", r.k},
          {"alpha_order2", r.alpha_order2},
          {"alpha_order3", r.alpha_order3},
          {"alpha_order3_fterms", r.alpha_order3_fterms},
          {"alpha_prime0", r.alpha_prime0},
          {"alpha_doubleprime0", r.alpha_doubleprime0},
          {"alpha_tripleprime0", r.alpha_tripleprime0},
          {"f_terms", r.f_terms},
          {"coupling", to_string(r.coupling)},
          {"wealth", r.diagnostics.wealth},
          {"moments", to_json(r.diagnostics.moments)},
          {"indicators", to_json(r.diagnostics.indicators)},
          {"ratios", to_json(r.diagnostics.ratios)}};
}

json to_json(const OracleResult& r) {
  return {{"alpha_star", r.alpha_star},
          {"foc_residual", r.foc_residual},
          {"v_at_star", r.v_at_star},
          {"concavity_certificate", r.concavity_certificate},
          {"expansions", r.expansions},
          {"boundary_shrinks", r.boundary_shrinks},
          {"iterations", r.iterations}};
}

}  // namespace possalloc

#pragma once

#include <nlohmann/json.hpp>

#include <string>

#include "possalloc/allocation.hpp"
#include "possalloc/error.hpp"
#include "possalloc/oracle.hpp"

namespace possalloc {

using json = nlohmann::json;

/// A configuration document is malformed; `field()` is the dotted path of the
/// offending member (empty for syntax errors, which carry line/column).
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}

  [[nodiscard]] const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Parses text, converting syntax errors into ConfigError with line/column.
[[nodiscard]] json parse_document(const std::string& text);

// {"kind":"triangular","a":..,"alpha":..,"beta":..} or
// {"kind":"tabulated","gamma":[..],"a1":[..],"a2":[..]}
[[nodiscard]] json to_json(const FuzzyNumber& a);
[[nodiscard]] FuzzyNumber fuzzy_from_json(const json& doc, const std::string& path = "risk");

// {"kind":"linear"} | {"kind":"uniform"} | {"kind":"power","scale":s,"exponent":p}
[[nodiscard]] json to_json(const WeightingFunction& f);
[[nodiscard]] WeightingFunction weighting_from_json(const json& doc,
                                                    const std::string& path = "weighting");

// {"family":"crra","a":..} | {"family":"hara","zeta":..,"delta":..,"gamma":..} |
// {"family":"cara","c":..} | {"family":"polynomial","coefficients":[..],"domain":[lo,hi]}
[[nodiscard]] json to_json(const UtilityModel& u);
/// Polynomial utilities are not shape-checked here; see shape_violations().
[[nodiscard]] UtilityModel utility_from_json(const json& doc, const std::string& path = "utility");

/// Optional overrides applied on top of the operator document.
struct QuadratureOverride {
  std::optional<std::size_t> outer_nodes;
  std::optional<std::size_t> inner_nodes;
};

// "T1" | {"kind":"T1","outer_nodes":64,"inner_nodes":32}; weighting comes
// from a sibling "weighting" member.
[[nodiscard]] EUOperator operator_from_json(const json& model_doc, const std::string& path,
                                            const QuadratureOverride& override = {});

/// Model document: w0, r, k, mu, risk | return, utility, operator, weighting.
[[nodiscard]] PortfolioModel model_from_json(const json& doc, const std::string& path = "model",
                                             const QuadratureOverride& override = {});
[[nodiscard]] json to_json(const PortfolioModel& m);

[[nodiscard]] FocSolverConfig solver_from_json(const json& doc, const std::string& path = "solver");

[[nodiscard]] json to_json(const MomentSet& m);
[[nodiscard]] json to_json(const RiskIndicators& r);
[[nodiscard]] json to_json(const IndicatorRatios& r);
[[nodiscard]] json to_json(const AllocationResult& r);
[[nodiscard]] json to_json(const OracleResult& r);

}  // namespace possalloc

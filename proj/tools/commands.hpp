#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "possalloc/allocation.hpp"
#include "possalloc/oracle.hpp"
#include "possalloc/serialization.hpp"

namespace possalloc::cli {

enum class Command { moments, allocate, sweep, verify };
enum class OutputFormat { table, csv, document };

struct SweepRange {
  double k_min = 0.0;
  double k_max = 0.2;
  int steps = 5;
};

struct RunConfig {
  Command command = Command::moments;
  /// Absent only for verify, which then runs the benchmark suite.
  std::optional<PortfolioModel> model;
  FocSolverConfig solver;
  SweepRange sweep;
  OutputFormat format = OutputFormat::table;
  int order = 3;
  TemperanceCoupling coupling = TemperanceCoupling::product;
  bool verbose = false;
};

/// Command-line values; each one set here wins over the config file.
struct Overrides {
  std::optional<double> k;
  std::optional<int> order;
  std::optional<std::size_t> nodes;
  std::optional<std::size_t> inner_nodes;
  std::optional<std::string> format;
  std::optional<double> k_min;
  std::optional<double> k_max;
  std::optional<int> steps;
  std::optional<std::string> coupling;
  bool verbose = false;
};

/// Config document:
/// {"model": {...}, "solver": {...}, "sweep": {"k_min", "k_max", "steps"},
///  "order": 2|3, "format": "table"|"csv"|"document", "coupling": "product"|"as_printed"}
/// Throws ConfigError with the offending field.
[[nodiscard]] RunConfig load_config(Command command, const std::optional<std::string>& path,
                                    const Overrides& overrides);
[[nodiscard]] RunConfig config_from_document(Command command, const json& doc,
                                             const Overrides& overrides);

int cmd_moments(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_allocate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err);
/// Nonzero iff at least one check fails.
int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);

inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;

/// Full command line: parses arguments, loads the config and dispatches.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace possalloc::cli

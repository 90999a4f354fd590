#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "possalloc/benchmark.hpp"
#include "possalloc/verification.hpp"

namespace possalloc::cli {
namespace {

constexpr int kTableDigits = 12;
constexpr int kCsvDigits = 17;

std::string number(double x, int digits) {
  std::ostringstream s;
  s << std::setprecision(digits) << x;
  return s.str();
}

std::string cell(double x) { return number(x, kTableDigits); }

OutputFormat parse_format(const std::string& text, const std::string& field) {
  if (text == "table") return OutputFormat::table;
  if (text == "csv") return OutputFormat::csv;
  if (text == "document") return OutputFormat::document;
  throw ConfigError(field, "unknown format '" + text + "' (table, csv or document)");
}

TemperanceCoupling parse_coupling(const std::string& text, const std::string& field) {
  if (text == "product") return TemperanceCoupling::product;
  if (text == "as_printed") return TemperanceCoupling::as_printed;
  throw ConfigError(field, "unknown coupling '" + text + "' (product or as_printed)");
}

template <class T>
T member(const json& doc, const std::string& key, const std::string& path, T fallback) {
  if (!doc.contains(key)) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(path + "." + key, "has the wrong type");
  }
}

// Left-aligned first column, right-aligned rest.
void print_table(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows) {
    width.resize(std::max(width.size(), row.size()), 0);
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) line += "  ";
      const std::string pad(width[i] - row[i].size(), ' ');
      line += i == 0 ? row[i] + pad : pad + row[i];
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << '\n';
  }
}

const PortfolioModel& require_model(const RunConfig& cfg) {
  if (!cfg.model) throw ConfigError("model", "is required for this command");
  return *cfg.model;
}

// ---- moments ---------------------------------------------------------------

std::optional<MomentSet> closed_form(const PortfolioModel& m) {
  const auto shape = m.risk().triangular_shape();
  if (!shape) return std::nullopt;
  try {
    return triangular_closed_moments(*shape, m.op());
  } catch (const UnsupportedConfiguration&) {
    return std::nullopt;
  }
}

// ---- allocate --------------------------------------------------------------

struct MethodRow {
  std::string method;
  std::optional<double> alpha;
  std::optional<double> value;
  std::string note;
};

std::string oracle_error_text(const std::exception& e) { return std::string("oracle failed: ") + e.what(); }

}  // namespace

RunConfig config_from_document(Command command, const json& doc, const Overrides& overrides) {
  if (!doc.is_object()) throw ConfigError("", "config document must be an object");
  RunConfig cfg;
  cfg.command = command;

  QuadratureOverride quadrature;
  quadrature.outer_nodes = overrides.nodes;
  quadrature.inner_nodes = overrides.inner_nodes;

  if (doc.contains("model")) {
    auto model = model_from_json(doc.at("model"), "model", quadrature);
    if (overrides.k) {
      if (!(*overrides.k >= 0.0)) throw ConfigError("--k", "must be non-negative");
      model = model.with_k(*overrides.k);
    }
    cfg.model = std::move(model);
  } else if (command != Command::verify) {
    throw ConfigError("model", "is required");
  }
  if (doc.contains("solver")) cfg.solver = solver_from_json(doc.at("solver"), "solver");

  if (doc.contains("sweep")) {
    const auto& s = doc.at("sweep");
    if (!s.is_object()) throw ConfigError("sweep", "must be an object");
    cfg.sweep.k_min = member(s, "k_min", "sweep", cfg.sweep.k_min);
    cfg.sweep.k_max = member(s, "k_max", "sweep", cfg.sweep.k_max);
    cfg.sweep.steps = member(s, "steps", "sweep", cfg.sweep.steps);
  }
  if (overrides.k_min) cfg.sweep.k_min = *overrides.k_min;
  if (overrides.k_max) cfg.sweep.k_max = *overrides.k_max;
  if (overrides.steps) cfg.sweep.steps = *overrides.steps;
  if (command == Command::sweep) {
    if (!(cfg.sweep.k_min >= 0.0)) throw ConfigError("sweep.k_min", "must be non-negative");
    if (!(cfg.sweep.k_max >= cfg.sweep.k_min)) {
      throw ConfigError("sweep.k_max", "must not be below k_min");
    }
    if (cfg.sweep.steps < 2) throw ConfigError("sweep.steps", "must be at least 2");
  }

  cfg.order = overrides.order.value_or(member(doc, "order", "", cfg.order));
  if (cfg.order != 2 && cfg.order != 3) throw ConfigError("order", "must be 2 or 3");

  if (overrides.format) {
    cfg.format = parse_format(*overrides.format, "--format");
  } else if (doc.contains("format")) {
    cfg.format = parse_format(member<std::string>(doc, "format", "", ""), "format");
  } else if (command == Command::sweep) {
    cfg.format = OutputFormat::csv;
  }

  if (overrides.coupling) {
    cfg.coupling = parse_coupling(*overrides.coupling, "--coupling");
  } else if (doc.contains("coupling")) {
    cfg.coupling = parse_coupling(member<std::string>(doc, "coupling", "", ""), "coupling");
  }
  cfg.verbose = overrides.verbose;
  return cfg;
}

RunConfig load_config(Command command, const std::optional<std::string>& path,
                      const Overrides& overrides) {
  if (!path) {
    if (command != Command::verify) throw ConfigError("config", "a config file is required");
    return config_from_document(command, json::object(), overrides);
  }
  std::ifstream in(*path);
  if (!in) throw ConfigError("config", "cannot open '" + *path + "'");
  std::stringstream text;
  text << in.rdbuf();
  return config_from_document(command, parse_document(text.str()), overrides);
}

int cmd_moments(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const auto& m = require_model(cfg);
  const auto q = central_moments(m.op(), m.risk());
  const auto closed = closed_form(m);

  const double qs[] = {q.expected_value, q.variance, q.skewness, q.kurtosis};
  const char* names[] = {"E_f", "Var_T", "Sk_T", "K_T"};
  double discrepancy = 0.0;
  if (closed) {
    const double cs[] = {closed->expected_value, closed->variance, closed->skewness,
                         closed->kurtosis};
    for (int i = 0; i < 4; ++i) discrepancy = std::max(discrepancy, std::abs(qs[i] - cs[i]));
  }
  const auto closed_at = [&](int i) -> std::optional<double> {
    if (!closed) return std::nullopt;
    const double cs[] = {closed->expected_value, closed->variance, closed->skewness,
                         closed->kurtosis};
    return cs[i];
  };

  switch (cfg.format) {
    case OutputFormat::document: {
      json doc{{"quadrature", to_json(q)}};
      doc["closed_form"] = closed ? to_json(*closed) : json(nullptr);
      doc["max_discrepancy"] = closed ? json(discrepancy) : json(nullptr);
      out << doc.dump(2) << '\n';
      break;
    }
    case OutputFormat::csv:
      out << "quantity,quadrature,closed_form\n";
      for (int i = 0; i < 4; ++i) {
        const auto c = closed_at(i);
        out << names[i] << ',' << number(qs[i], kCsvDigits) << ','
            << (c ? number(*c, kCsvDigits) : "") << '\n';
      }
      break;
    case OutputFormat::table: {
      std::vector<std::vector<std::string>> rows{{"moment", "quadrature", "closed form"}};
      for (int i = 0; i < 4; ++i) {
        const auto c = closed_at(i);
        rows.push_back({names[i], cell(qs[i]), c ? cell(*c) : "n/a"});
      }
      print_table(out, rows);
      if (closed) out << "max |quadrature - closed form| = " << number(discrepancy, 3) << '\n';
      break;
    }
  }
  return 0;
}

int cmd_allocate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto& m = require_model(cfg);
  if (!(m.k() > 0.0)) throw ConfigError("model.k", "allocate needs k > 0");

  std::optional<AllocationResult> approx;
  std::string approx_error;
  try {
    approx = allocate(m, cfg.coupling);
  } catch (const Error& e) {
    approx_error = e.what();
  }

  std::vector<MethodRow> rows;
  const auto add_row = [&](std::string method, std::optional<double> alpha, std::string note) {
    MethodRow row{std::move(method), alpha, std::nullopt, std::move(note)};
    if (alpha) {
      try {
        row.value = total_utility(m, *alpha);
      } catch (const DomainError& e) {
        row.note = e.what();
      }
      if (*alpha < 0.0 || *alpha > m.initial_wealth()) {
        err << "warning: " << row.method << " allocation " << cell(*alpha)
            << " lies outside [0, w0 = " << cell(m.initial_wealth()) << "]\n";
      }
    }
    rows.push_back(std::move(row));
  };

  add_row("order2", approx ? std::optional(approx->alpha_order2) : std::nullopt, approx_error);
  if (cfg.order >= 3) {
    add_row("order3", approx ? std::optional(approx->alpha_order3) : std::nullopt, approx_error);
  }
  std::optional<OracleResult> oracle;
  try {
    oracle = solve_foc(m, cfg.solver);
    add_row("oracle", oracle->alpha_star, "");
  } catch (const Error& e) {
    add_row("oracle", std::nullopt, oracle_error_text(e));
  }

  const auto error_vs_oracle = [&](const MethodRow& row) -> std::optional<double> {
    if (!oracle || !row.alpha) return std::nullopt;
    return *row.alpha - oracle->alpha_star;
  };

  if (cfg.format == OutputFormat::document) {
    json doc{{"k", m.k()}, {"order", cfg.order}, {"coupling", to_string(cfg.coupling)}};
    json methods = json::array();
    for (const auto& row : rows) {
      json r{{"method", row.method}};
      r["alpha"] = row.alpha ? json(*row.alpha) : json(nullptr);
      r["value"] = row.value ? json(*row.value) : json(nullptr);
      const auto e = error_vs_oracle(row);
      r["error"] = e ? json(*e) : json(nullptr);
      if (!row.note.empty()) r["note"] = row.note;
      methods.push_back(r);
    }
    doc["methods"] = methods;
    if (approx) doc["allocation"] = to_json(*approx);
    if (oracle) doc["oracle"] = to_json(*oracle);
    out << doc.dump(2) << '\n';
    return 0;
  }

  if (cfg.format == OutputFormat::csv) {
    out << "method,alpha,value,error,relative_error,note\n";
    for (const auto& row : rows) {
      const auto e = error_vs_oracle(row);
      out << row.method << ',' << (row.alpha ? number(*row.alpha, kCsvDigits) : "") << ','
          << (row.value ? number(*row.value, kCsvDigits) : "") << ','
          << (e ? number(*e, kCsvDigits) : "") << ','
          << (e && oracle->alpha_star != 0.0 ? number(*e / oracle->alpha_star, kCsvDigits) : "")
          << ',';
      if (!row.note.empty()) out << '"' << row.note << '"';
      out << '\n';
    }
    return 0;
  }

  std::vector<std::vector<std::string>> table{
      {"method", "alpha", "V(alpha)", "error", "relative error", "note"}};
  for (const auto& row : rows) {
    const auto e = error_vs_oracle(row);
    table.push_back({row.method, row.alpha ? cell(*row.alpha) : "-",
                     row.value ? cell(*row.value) : "-", e ? cell(*e) : "-",
                     e && oracle->alpha_star != 0.0 ? cell(*e / oracle->alpha_star) : "-",
                     row.note});
  }
  out << "k = " << cell(m.k()) << ", mu = " << cell(m.mu()) << ", w = " << cell(m.wealth())
      << ", coupling = " << to_string(cfg.coupling) << '\n';
  print_table(out, table);

  if (cfg.verbose && approx) {
    out << "\nderivative chain\n";
    print_table(out, {{"alpha'(0)", cell(approx->alpha_prime0)},
                      {"alpha''(0)", cell(approx->alpha_doubleprime0)},
                      {"alpha'''(0)", cell(approx->alpha_tripleprime0)}});
    out << "\nF-terms\n";
    std::vector<std::vector<std::string>> f;
    for (std::size_t i = 0; i < approx->f_terms.size(); ++i) {
      f.push_back({"F" + std::to_string(i + 1), cell(approx->f_terms[i])});
    }
    f.push_back({"order3 (F-terms)", cell(approx->alpha_order3_fterms)});
    print_table(out, f);
    const auto& d = approx->diagnostics;
    out << "\nindicators at w\n";
    print_table(out, {{"r_u", cell(d.indicators.risk_aversion)},
                      {"P_u", cell(d.indicators.prudence)},
                      {"T_u", cell(d.indicators.temperance)},
                      {"Var_T", cell(d.moments.variance)},
                      {"Sk_T", cell(d.moments.skewness)},
                      {"K_T", cell(d.moments.kurtosis)}});
  }
  if (cfg.verbose && oracle) {
    out << "\noracle: |V'(alpha*)| = " << number(std::abs(oracle->foc_residual), 3)
        << ", max sampled V'' = " << number(oracle->concavity_certificate, 3)
        << ", expansions = " << oracle->expansions << ", iterations = " << oracle->iterations
        << '\n';
  }
  return 0;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto& base = require_model(cfg);
  const auto& range = cfg.sweep;

  struct Row {
    double k;
    std::optional<double> order2, order3, oracle;
    std::string failure;
  };
  std::vector<Row> rows;
  for (int i = 0; i < range.steps; ++i) {
    const double k = i == range.steps - 1
                         ? range.k_max
                         : range.k_min + (range.k_max - range.k_min) * i / (range.steps - 1);
    const auto m = base.with_k(k);
    Row row{k, std::nullopt, std::nullopt, std::nullopt, ""};
    try {
      const auto a = allocate(m, cfg.coupling);
      row.order2 = a.alpha_order2;
      row.order3 = a.alpha_order3;
    } catch (const Error& e) {
      row.failure = e.what();
    }
    try {
      row.oracle = solve_foc(m, cfg.solver).alpha_star;
    } catch (const Error& e) {
      row.failure = oracle_error_text(e);
    }
    if (!row.failure.empty()) err << "k = " << number(k, kCsvDigits) << ": " << row.failure << '\n';
    rows.push_back(std::move(row));
  }

  const auto diff = [](const std::optional<double>& a, const std::optional<double>& b) {
    return a && b ? std::optional(std::abs(*a - *b)) : std::nullopt;
  };

  if (cfg.format == OutputFormat::document) {
    json doc = json::array();
    for (const auto& r : rows) {
      const auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
      doc.push_back({{"k", r.k},
                     {"alpha_order2", opt(r.order2)},
                     {"alpha_order3", opt(r.order3)},
                     {"alpha_oracle", opt(r.oracle)},
                     {"err2", opt(diff(r.order2, r.oracle))},
                     {"err3", opt(diff(r.order3, r.oracle))}});
    }
    out << doc.dump(2) << '\n';
  } else {
    const auto csv = [](const std::optional<double>& v) {
      return v ? number(*v, kCsvDigits) : std::string();
    };
    out << "k,alpha_order2,alpha_order3,alpha_oracle,err2,err3\n";
    for (const auto& r : rows) {
      out << number(r.k, kCsvDigits) << ',' << csv(r.order2) << ',' << csv(r.order3) << ','
          << csv(r.oracle) << ',' << csv(diff(r.order2, r.oracle)) << ','
          << csv(diff(r.order3, r.oracle)) << '\n';
    }
  }

  // Diagnostics: first k where order 3 stops beating order 2, and the
  // third divided difference of the oracle curve as a smoothness probe.
  std::optional<double> crossover;
  std::vector<double> ks, alphas;
  for (const auto& r : rows) {
    const auto e2 = diff(r.order2, r.oracle);
    const auto e3 = diff(r.order3, r.oracle);
    if (!crossover && e2 && e3 && r.k > 0.0 && *e3 > *e2) crossover = r.k;
    if (r.oracle) {
      ks.push_back(r.k);
      alphas.push_back(*r.oracle);
    }
  }
  err << "crossover: " << (crossover ? "k = " + number(*crossover, kTableDigits) : "none in range")
      << '\n';
  if (ks.size() >= 4) {
    const auto dd = divided_differences(ks, alphas, 3);
    double lo = dd.front();
    double hi = dd.front();
    for (double v : dd) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    err << "third divided differences of alpha_oracle(k): [" << number(lo, 6) << ", "
        << number(hi, 6) << "]\n";
  }
  return 0;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  std::vector<VerificationReport> reports;
  if (cfg.model) {
    reports.push_back(verify_model(*cfg.model, cfg.solver, "model"));
  } else {
    reports = verify_benchmark(cfg.solver);
  }

  bool ok = true;
  if (cfg.format == OutputFormat::document) {
    json doc = json::array();
    for (const auto& r : reports) {
      json checks = json::array();
      for (const auto& c : r.checks) {
        checks.push_back({{"name", c.name},
                          {"passed", c.passed},
                          {"residual", std::isfinite(c.residual) ? json(c.residual) : json(nullptr)},
                          {"tolerance", c.tolerance},
                          {"detail", c.detail}});
      }
      doc.push_back({{"label", r.label}, {"passed", r.passed()}, {"checks", checks}});
      ok = ok && r.passed();
    }
    out << doc.dump(2) << '\n';
    return ok ? 0 : kExitFailure;
  }

  std::vector<std::vector<std::string>> table{{"status", "check", "residual", "tolerance", "detail"}};
  std::size_t failed = 0;
  std::size_t total = 0;
  for (const auto& r : reports) {
    for (const auto& c : r.checks) {
      ++total;
      if (!c.passed) ++failed;
      table.push_back({c.passed ? "PASS" : "FAIL", r.label + "/" + c.name,
                       std::isfinite(c.residual) ? number(c.residual, 3) : "n/a",
                       number(c.tolerance, 3), c.detail});
    }
  }
  ok = failed == 0;
  if (cfg.format == OutputFormat::csv) {
    out << "status,check,residual,tolerance\n";
    for (std::size_t i = 1; i < table.size(); ++i) {
      out << table[i][0] << ',' << table[i][1] << ',' << table[i][2] << ',' << table[i][3] << '\n';
    }
  } else {
    print_table(out, table);
    out << (total - failed) << "/" << total << " checks passed\n";
  }
  return ok ? 0 : kExitFailure;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Portfolio allocation under possibilistic risk", "possalloc"};
  app.require_subcommand(1);

  Overrides overrides;
  std::optional<std::string> config_path;
  std::string config_arg;

  const auto common = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("config", config_arg, "config document (JSON)");
    if (config_required) opt->required();
    sub->add_option("--nodes", overrides.nodes, "outer quadrature nodes");
    sub->add_option("--inner-nodes", overrides.inner_nodes, "inner quadrature nodes (T2)");
    sub->add_option("--format", overrides.format, "table, csv or document");
    sub->add_option("--coupling", overrides.coupling, "product or as_printed");
    sub->add_option("--k", overrides.k, "risk premium scale k");
  };

  auto* moments = app.add_subcommand("moments", "possibilistic moments of the risk component");
  common(moments, true);
  auto* alloc = app.add_subcommand("allocate", "approximate and exact optimal allocation");
  common(alloc, true);
  alloc->add_option("--order", overrides.order, "approximation order (2 or 3)");
  alloc->add_flag("--verbose", overrides.verbose, "print derivative chain and F-terms");
  auto* sweep = app.add_subcommand("sweep", "allocations over a range of k (CSV)");
  common(sweep, true);
  sweep->add_option("--k-min", overrides.k_min, "first k");
  sweep->add_option("--k-max", overrides.k_max, "last k");
  sweep->add_option("--steps", overrides.steps, "number of k values");
  auto* verify = app.add_subcommand("verify", "invariant checks (benchmark suite without config)");
  common(verify, false);

  std::vector<std::string> storage{"possalloc"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitConfig;
  }
  if (!config_arg.empty()) config_path = config_arg;

  Command command = Command::verify;
  if (moments->parsed()) command = Command::moments;
  if (alloc->parsed()) command = Command::allocate;
  if (sweep->parsed()) command = Command::sweep;

  try {
    const auto cfg = load_config(command, config_path, overrides);
    switch (command) {
      case Command::moments:
        return cmd_moments(cfg, out, err);
      case Command::allocate:
        return cmd_allocate(cfg, out, err);
      case Command::sweep:
        return cmd_sweep(cfg, out, err);
      case Command::verify:
        return cmd_verify(cfg, out, err);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvalidParameter& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace possalloc::cli

#include "hillband/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string_view>
#include <variant>

#include <unistd.h>

#include <CLI11.hpp>
#include <fmt/color.h>
#include <fmt/format.h>
#include <json.hpp>

#include "hillband/errors.hpp"
#include "hillband/floquet.hpp"
#include "hillband/hyp_oracle.hpp"
#include "hillband/spps.hpp"

#ifndef HILLBAND_VERSION
#define HILLBAND_VERSION "unknown"
#endif

namespace hillband::cli {

namespace {

using Cell = std::variant<std::monostate, double, long long, std::string>;

struct Table {
  std::string command;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string csv_field(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return "";
        } else if constexpr (std::is_same_v<T, double>) {
          return fmt::format("{:.16e}", v);
        } else {
          return fmt::format("{}", v);
        }
      },
      c);
}

nlohmann::json json_field(const Cell& c) {
  return std::visit(
      [](const auto& v) -> nlohmann::json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else {
          return v;
        }
      },
      c);
}

void write_table(const Table& t, Format format, std::ostream& os) {
  if (format == Format::csv) {
    std::string line;
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
      if (i) line += ',';
      line += t.columns[i];
    }
    os << line << '\n';
    for (const auto& row : t.rows) {
      line.clear();
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) line += ',';
        line += csv_field(row[i]);
      }
      os << line << '\n';
    }
    return;
  }
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[t.columns[i]] = json_field(row[i]);
    rows.push_back(std::move(obj));
  }
  nlohmann::json doc = {{"command", t.command}, {"columns", t.columns}, {"rows", std::move(rows)}};
  os << doc.dump(2) << '\n';
}

class Diagnostics {
 public:
  Diagnostics(std::ostream& err, bool color) : err_(err), color_(color) {}

  void error(std::string_view msg) const { emit("error", fmt::fg(fmt::color::red), msg); }
  void warning(std::string_view msg) const { emit("warning", fmt::fg(fmt::color::yellow), msg); }
  void note(std::string_view msg) const { err_ << msg << '\n'; }

 private:
  void emit(std::string_view label, fmt::text_style style, std::string_view msg) const {
    if (color_) {
      err_ << fmt::format(style | fmt::emphasis::bold, "{}", label);
    } else {
      err_ << label;
    }
    err_ << ": " << msg << '\n';
  }

  std::ostream& err_;
  bool color_;
};

struct OracleFailure {
  double x;
  double K2;
  std::string message;
};

// Oracle evaluations report the point they failed at.
template <typename F>
auto oracle_call(double x, double K2, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NonConvergence || e.kind() == ErrorKind::DegeneratePair) {
      throw OracleFailure{x, K2, e.what()};
    }
    throw;
  }
}

SppsBasis make_basis(const RunConfig& cfg) {
  return build_basis(ModelParams(cfg.k0, cfg.s), cfg.grid_n, cfg.spps_terms);
}

int cmd_scan(const RunConfig& cfg, Table& table, const Diagnostics&) {
  const HillSeries hs = hill_series(make_basis(cfg));
  table.columns = {"K2", "D_re", "D_im", "in_band", "P_re", "P_im"};
  const double step = (cfg.k2_max - cfg.k2_min) / (cfg.samples - 1);
  for (int i = 0; i < cfg.samples; ++i) {
    const double K2 = i + 1 == cfg.samples ? cfg.k2_max : cfg.k2_min + i * step;
    const Complex D = hill_eval(hs, K2);
    const Complex P = dispersion(hs, K2);
    table.rows.push_back({K2, D.real(), D.imag(), static_cast<long long>(in_band(D) ? 1 : 0),
                          P.real(), P.imag()});
  }
  return kOk;
}

int cmd_edges(const RunConfig& cfg, Table& table, const Diagnostics& diag) {
  const ModelParams params(cfg.k0, cfg.s);
  if (!(cfg.k2_min <= params.K0sq() && params.K0sq() < cfg.k2_max)) {
    throw UsageError(fmt::format("edge window [{}, {}] must contain K0^2 = {}", cfg.k2_min,
                                 cfg.k2_max, params.K0sq()));
  }
  const HillSeries hs = hill_series(make_basis(cfg));
  EdgeSearchOptions options;
  options.root_tol = cfg.root_tol;
  const BandStructure bs = find_band_edges(hs, cfg.k2_min, cfg.k2_max, options);
  table.columns = {"n", "parity", "K2_numeric", "K2_analytic", "abs_err"};
  double worst = 0.0;
  for (const BandEdge& e : bs.edges) {
    const double analytic = bandedge_K2(e.index, e.parity, params);
    const double err = std::abs(e.K2 - analytic);
    worst = std::max(worst, err);
    table.rows.push_back({static_cast<long long>(e.index), std::string(to_string(e.parity)), e.K2,
                          analytic, err});
  }
  for (const AnomalousExtremum& a : bs.anomalies) {
    diag.warning(fmt::format("anomalous extremum of D at K2 = {:.17g}: D = {:.12g}{:+.3e}i", a.K2,
                             a.D.real(), a.D.imag()));
  }
  if (!(worst <= cfg.tol)) {
    diag.error(fmt::format("max edge error {:.3e} exceeds tol {:.3e}", worst, cfg.tol));
    return kToleranceFailure;
  }
  return kOk;
}

int cmd_bloch(const RunConfig& cfg, Table& table, const Diagnostics&) {
  if (cfg.k2.empty()) throw UsageError("bloch needs at least one --k2 value");
  if (cfg.cells < 1 || cfg.cells > kMaxCellIndex) {
    throw UsageError(fmt::format("--cells must lie in [1, {}], got {}", kMaxCellIndex, cfg.cells));
  }
  const SppsBasis basis = make_basis(cfg);
  const HillSeries hs = hill_series(basis);
  const bool several = cfg.k2.size() > 1;
  table.columns = {"x", "f+_re", "f+_im", "f-_re", "f-_im", "g+_re", "g+_im", "g-_re", "g-_im"};
  if (several) table.columns.insert(table.columns.begin(), "K2");

  const double Lambda = basis.params().Lambda();
  const int N = basis.grid().n_intervals();
  for (double K2 : cfg.k2) {
    const Complex D = hill_eval(hs, K2);
    if (!in_band(D) && !cfg.allow_gap) {
      throw UsageError(fmt::format(
          "K2 = {} lies outside the spectrum (D = {:.12g}{:+.3e}i); pass --allow-gap to extend "
          "growing solutions anyway",
          K2, D.real(), D.imag()));
    }
    const BlochSolutions bloch(basis, K2);
    for (long j = 0; j <= static_cast<long>(cfg.cells) * N; ++j) {
      const double x = Lambda * (static_cast<double>(j) / N);
      const BlochValues f = bloch.f(x);
      const std::optional<BlochValues> g = bloch.g(x);
      std::vector<Cell> row;
      if (several) row.emplace_back(K2);
      row.insert(row.end(), {x, f.plus.real(), f.plus.imag(), f.minus.real(), f.minus.imag()});
      if (g) {
        row.insert(row.end(), {g->plus.real(), g->plus.imag(), g->minus.real(), g->minus.imag()});
      } else {
        row.insert(row.end(), 4, std::monostate{});
      }
      table.rows.push_back(std::move(row));
    }
  }
  return kOk;
}

struct CheckResult {
  std::string name;
  double max_error;
};

CheckResult check_f_solutions(const SppsBasis& basis, const std::vector<double>& k2s) {
  const ModelParams& p = basis.params();
  double worst = 0.0;
  for (double K2 : k2s) {
    const NormalizedOracle oracle =
        oracle_call(0.0, K2, [&] { return NormalizedOracle(Problem::f, K2, p); });
    for (int i = 0; i <= 50; ++i) {
      const double x = p.Lambda() * i / 50.0;
      const CellSolution c = eval_cell_solutions(basis, K2, x);
      const NormalizedSolutions o = oracle_call(x, K2, [&] { return oracle.at(x); });
      worst = std::max({worst, std::abs(c.f1 - o.u1), std::abs(c.f2 - o.u2)});
    }
  }
  return {"f_solutions", worst};
}

CheckResult check_g_solutions(const SppsBasis& basis, const std::vector<double>& k2s) {
  const ModelParams& p = basis.params();
  const SingularSet poles = SingularSet::of(p);
  double worst = 0.0;
  for (double K2 : k2s) {
    const NormalizedOracle oracle =
        oracle_call(0.0, K2, [&] { return NormalizedOracle(Problem::g, K2, p); });
    for (int i = 0; i <= 50; ++i) {
      const double x = p.Lambda() * i / 50.0;
      if (std::abs(x - poles.nearest_pole(x)) < p.Lambda() / 100.0) continue;
      const CellSolution g = darboux_partner(basis, K2, x);
      const NormalizedSolutions o = oracle_call(x, K2, [&] { return oracle.at(x); });
      worst = std::max({worst, std::abs(g.f1 - o.u1), std::abs(g.f2 - o.u2)});
    }
  }
  return {"g_solutions", worst};
}

CheckResult check_discriminant(const HillSeries& hs) {
  const ModelParams& p = hs.params;
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double delta = 20.0 * i / 199.0;
    const double K2 = p.K0sq() + delta;
    const double exact = 2.0 * std::cos(p.Lambda() * std::sqrt(delta));
    worst = std::max(worst, std::abs(hill_eval(hs, K2) - exact));
  }
  return {"discriminant", worst};
}

CheckResult check_edges(const HillSeries& hs, const Diagnostics& diag) {
  const ModelParams& p = hs.params;
  const BandStructure bs = find_band_edges(hs, p.K0sq(), p.K0sq() + 20.0);
  double worst = 0.0;
  for (const BandEdge& e : bs.edges) {
    worst = std::max(worst, std::abs(e.K2 - bandedge_K2(e.index, e.parity, p)));
  }
  if (!bs.anomalies.empty()) {
    diag.warning(fmt::format("{} anomalous extrema of D in the edge window", bs.anomalies.size()));
    worst = std::numeric_limits<double>::infinity();
  }
  return {"band_edges", worst};
}

CheckResult check_trace_identity(const SppsBasis& basis, const std::vector<double>& k2s) {
  double worst = 0.0;
  for (double K2 : k2s) {
    worst = std::max(worst,
                     std::abs(monodromy_g(basis, K2).trace() - monodromy_f(basis, K2).trace()));
  }
  return {"trace_identity", worst};
}

int cmd_validate(const RunConfig& cfg, Table& table, const Diagnostics& diag) {
  const SppsBasis basis = make_basis(cfg);
  const HillSeries hs = hill_series(basis);
  const std::vector<double> k2s{0.25, 2.25, 6.25};
  const std::vector<CheckResult> results{
      check_f_solutions(basis, k2s), check_g_solutions(basis, k2s), check_discriminant(hs),
      check_edges(hs, diag), check_trace_identity(basis, k2s)};
  table.columns = {"check", "max_error", "tolerance", "pass"};
  bool all = true;
  for (const CheckResult& r : results) {
    const bool pass = r.max_error <= cfg.tol;
    all = all && pass;
    table.rows.push_back(
        {r.name, r.max_error, cfg.tol, static_cast<long long>(pass ? 1 : 0)});
  }
  if (!all) diag.error(fmt::format("validation exceeded tol {:.3e}", cfg.tol));
  return all ? kOk : kToleranceFailure;
}

enum class Command { scan, edges, bloch, validate, version };

std::string config_help() {
  return "flat key=value file using the long flag names (k0=1, s=0.1, ...); command-line "
         "flags win over the file";
}

}  // namespace

void check_config(const RunConfig& cfg) {
  if (!(cfg.k0 > 0.0) || !std::isfinite(cfg.k0)) {
    throw UsageError(fmt::format("--k0 must be a positive number, got {}", cfg.k0));
  }
  if (!std::isfinite(cfg.s)) throw UsageError("--s must be finite");
  if (!(cfg.k2_min < cfg.k2_max)) {
    throw UsageError(fmt::format("--k2-min ({}) must be below --k2-max ({})", cfg.k2_min,
                                 cfg.k2_max));
  }
  if (cfg.samples < 2) throw UsageError(fmt::format("--samples must be >= 2, got {}", cfg.samples));
  if (cfg.grid_n < 64 || cfg.grid_n % 2 != 0) {
    throw UsageError(fmt::format("--grid-n must be even and >= 64, got {}", cfg.grid_n));
  }
  if (cfg.spps_terms < 1) {
    throw UsageError(fmt::format("--spps-terms must be >= 1, got {}", cfg.spps_terms));
  }
  if (!(cfg.tol > 0.0)) throw UsageError(fmt::format("--tol must be > 0, got {}", cfg.tol));
  if (!(cfg.root_tol > 0.0)) {
    throw UsageError(fmt::format("--root-tol must be > 0, got {}", cfg.root_tol));
  }
}

int run(const std::vector<std::string>& args, Streams io) {
  const Diagnostics diag(io.err, io.color);
  RunConfig cfg;
  Command command = Command::version;

  CLI::App app{"Bloch solutions, Hill discriminant and band edges of a singular periodic "
               "Sturm-Liouville family",
               "hillband"};
  app.set_config("--config", "", config_help());
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--k0", cfg.k0, "base wavenumber k0 (period pi/k0)")->capture_default_str();
  app.add_option("--s", cfg.s, "imaginary part of S = i s")->capture_default_str();
  app.add_option("--k2-min,--k2_min", cfg.k2_min, "lower end of the K^2 window")->capture_default_str();
  app.add_option("--k2-max,--k2_max", cfg.k2_max, "upper end of the K^2 window")->capture_default_str();
  app.add_option("--samples", cfg.samples, "K^2 samples in scan")->capture_default_str();
  app.add_option("--grid-n,--grid_n", cfg.grid_n, "quadrature intervals per period")->capture_default_str();
  app.add_option("--spps-terms,--spps_terms", cfg.spps_terms, "series depth M")->capture_default_str();
  app.add_option("--tol", cfg.tol, "pass/fail tolerance")->capture_default_str();
  app.add_option("--root-tol,--root_tol", cfg.root_tol, "root tolerance in K^2 for edges")
      ->capture_default_str();
  app.add_option("--out", cfg.out_path, "output file (default stdout)");
  const std::map<std::string, Format> formats{{"csv", Format::csv}, {"json", Format::json}};
  app.add_option("--format", cfg.format, "csv or json")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case))
      ->option_text("csv|json");
  app.add_option("--k2", cfg.k2, "K^2 value for bloch (repeatable)")->take_all();
  app.add_option("--cells", cfg.cells, "cells to extend over in bloch")->capture_default_str();
  app.add_flag("--allow-gap,--allow_gap", cfg.allow_gap, "let bloch extend solutions for K^2 in a gap");

  const auto sub = [&](const char* name, const char* help, Command c) {
    app.add_subcommand(name, help)->callback([&command, c] { command = c; });
  };
  sub("scan", "tabulate D(K^2), band membership and quasimomentum", Command::scan);
  sub("edges", "locate band edges and compare with the closed forms", Command::edges);
  sub("bloch", "tabulate the Bloch pairs f+-, g+- over several cells", Command::bloch);
  sub("validate", "cross-check the series solutions against the exact ones", Command::validate);
  sub("version", "print the version", Command::version);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    io.out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    io.out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    diag.error(e.what());
    return kUsage;
  }

  if (command == Command::version) {
    io.out << "hillband " << HILLBAND_VERSION << '\n';
    return kOk;
  }

  Table table;
  int code = kOk;
  try {
    check_config(cfg);
    switch (command) {
      case Command::scan:
        table.command = "scan";
        code = cmd_scan(cfg, table, diag);
        break;
      case Command::edges:
        table.command = "edges";
        code = cmd_edges(cfg, table, diag);
        break;
      case Command::bloch:
        table.command = "bloch";
        code = cmd_bloch(cfg, table, diag);
        break;
      case Command::validate:
        table.command = "validate";
        code = cmd_validate(cfg, table, diag);
        break;
      case Command::version:
        break;
    }
  } catch (const UsageError& e) {
    diag.error(e.what());
    return kUsage;
  } catch (const TruncationError& e) {
    diag.error(e.what());
    return kTruncation;
  } catch (const OracleFailure& f) {
    diag.error(fmt::format("exact-solution oracle failed at x = {:.17g}, K2 = {:.17g}: {}", f.x,
                           f.K2, f.message));
    return kOracleFailure;
  } catch (const Error& e) {
    diag.error(e.what());
    switch (e.kind()) {
      case ErrorKind::NonConvergence:
      case ErrorKind::DegeneratePair:
        return kOracleFailure;
      default:
        return kUsage;
    }
  }

  if (cfg.out_path.empty()) {
    write_table(table, cfg.format, io.out);
  } else {
    std::ofstream file(cfg.out_path, std::ios::binary);
    if (!file) {
      diag.error(fmt::format("cannot open {} for writing", cfg.out_path));
      return kUsage;
    }
    write_table(table, cfg.format, file);
  }
  return code;
}

int main(int argc, char** argv) {
  const char* no_color = std::getenv("NO_COLOR");
  const bool color = (no_color == nullptr || *no_color == '\0') && isatty(STDERR_FILENO);
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, {std::cout, std::cerr, color});
}

}  // namespace hillband::cli

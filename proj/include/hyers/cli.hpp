#pragma once

// Command implementations behind the hyersctl tool. Each command writes its
// human-readable output to `out`, diagnostics to `err`, and returns an exit
// status:
//   0 success, 2 config error, 3 numeric failure, 4 bound violation.

#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "hyers/config.hpp"
#include "hyers/report.hpp"
#include "hyers/verify.hpp"

namespace hyers::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericFailure = 3, kBoundViolation = 4 };

/// Command-line flags; each one overrides the corresponding config value.
struct Overrides {
  std::optional<double> tol;
  std::optional<int> n_max;
  std::optional<std::size_t> probes;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> csv;
  std::optional<std::string> report;
  std::optional<std::string> trace_csv;
};

namespace detail {

inline bool write_file(const std::string& path, const std::string& content, std::ostream& err) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    err << "error: cannot open " << path << " for writing\n";
    return false;
  }
  f << content;
  return static_cast<bool>(f);
}

inline void apply(const Overrides& o, IterationSettings& s, ProbeSpec& p) {
  if (o.tol) s.tol = *o.tol;
  if (o.n_max) s.n_max = *o.n_max;
  if (o.probes) p.count = *o.probes;
  if (o.seed) p.seed = *o.seed;
}

inline int validate_overrides(const IterationSettings& s, const ProbeSpec& p, std::ostream& err) {
  if (!(s.tol > 0.0) || s.n_max < 1 || p.count < 1) {
    err << "error: --tol must be > 0, --n-max >= 1, --probes >= 1\n";
    return kConfigError;
  }
  return kOk;
}

/// Writes text/CSV/trace outputs for a finished report.
inline bool emit(const StabilityReport& rep, const MapSpec& f, const std::optional<std::string>& report_path,
                 const std::optional<std::string>& csv_path, const std::optional<std::string>& trace_path,
                 std::ostream& out, std::ostream& err) {
  std::ostringstream text;
  write_report_text(text, rep);
  out << text.str();
  bool ok = true;
  if (report_path) ok = write_file(*report_path, text.str(), err) && ok;
  if (csv_path) {
    std::ostringstream csv;
    write_report_csv(csv, rep);
    ok = write_file(*csv_path, csv.str(), err) && ok;
  }
  if (trace_path) {
    // Trace of the first probe point.
    const auto pairs = probe_pairs(f.algebra(), ProbeSpec{rep.probes.radius, rep.probes.seed, 1});
    const CubicApproximant T(f, rep.method, rep.settings);
    std::ostringstream csv;
    write_trace_csv(csv, T.evaluate(pairs.front().x).trace);
    ok = write_file(*trace_path, csv.str(), err) && ok;
  }
  return ok;
}

inline std::optional<RunConfig> load_config(const std::string& path, std::ostream& err) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    err << "error: cannot read config " << path << '\n';
    return std::nullopt;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const ConfigError& e) {
    err << "config error: " << path << ": " << e.what() << '\n';
  } catch (const Error& e) {
    err << "config error: " << path << ": " << e.what() << '\n';
  } catch (const std::invalid_argument& e) {
    err << "config error: " << path << ": " << e.what() << '\n';
  }
  return std::nullopt;
}

}  // namespace detail

/// Golden run of the worked example. Exit 0 iff every bound holds and the
/// residuals of T stay below 1e-8.
inline int cmd_example(const Overrides& o, std::ostream& out, std::ostream& err) {
  IterationSettings settings;
  ProbeSpec probes = kPaperExampleProbes;
  detail::apply(o, settings, probes);
  if (int rc = detail::validate_overrides(settings, probes, err)) return rc;
  try {
    const StabilityReport rep = run_paper_example(settings, probes);
    if (!detail::emit(rep, MapSpec::paper_example(), o.report, o.csv, o.trace_csv, out, err)) return kConfigError;
    if (!rep.all_bound_ok()) {
      err << "bound violated at probe " << *rep.first_violation() << '\n';
      return kBoundViolation;
    }
    if (!rep.residuals_ok()) {
      err << "residuals of T exceed " << format_number(rep.tolerances.residual) << '\n';
      return kBoundViolation;
    }
    return kOk;
  } catch (const Error& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kNumericFailure;
  }
}

inline int analyze_config(RunConfig cfg, const Overrides& o, std::ostream& out, std::ostream& err) {
  detail::apply(o, cfg.settings, cfg.probes);
  if (int rc = detail::validate_overrides(cfg.settings, cfg.probes, err)) return rc;
  const auto csv = o.csv ? o.csv : cfg.csv_path;
  const auto report = o.report ? o.report : cfg.report_path;
  const auto trace = o.trace_csv ? o.trace_csv : cfg.trace_csv_path;
  MapSpec f = MapSpec::zero_map(cfg.algebra);
  try {
    f = to_map_spec(cfg);
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  try {
    const StabilityReport rep = assemble_report(f, cfg.phi1, cfg.phi2, cfg.method, cfg.settings, cfg.probes);
    if (!detail::emit(rep, f, report, csv, trace, out, err)) return kConfigError;
    if (auto bad = rep.first_violation()) {
      err << "bound violated at probe " << *bad << '\n';
      return kBoundViolation;
    }
    return kOk;
  } catch (const Error& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kNumericFailure;
  }
}

/// Full stability report for the configured map.
inline int cmd_analyze(const std::string& path, const Overrides& o, std::ostream& out, std::ostream& err) {
  auto cfg = detail::load_config(path, err);
  if (!cfg) return kConfigError;
  return analyze_config(std::move(*cfg), o, out, err);
}

inline constexpr const char* kDefectsCsvHeader = "probe_index,norm_x,norm_y,defect_cubic,defect_mult,phi1,phi2,dominated";

inline int defects_config(RunConfig cfg, const Overrides& o, std::ostream& out, std::ostream& err) {
  detail::apply(o, cfg.settings, cfg.probes);
  if (int rc = detail::validate_overrides(cfg.settings, cfg.probes, err)) return rc;
  const auto csv_path = o.csv ? o.csv : cfg.csv_path;
  const MapSpec f = to_map_spec(cfg);
  const auto pairs = probe_pairs(f.algebra(), cfg.probes);

  std::ostringstream csv;
  csv << kDefectsCsvHeader << '\n';
  double sup_cubic = 0.0, sup_mult = 0.0;
  std::size_t undominated = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& [x, y] = pairs[i];
    const double dc = cubic_defect(f, x, y);
    const double dm = mult_defect(f, x, y);
    const double c1 = cfg.phi1(x, y);
    const double c2 = cfg.phi2(x, y);
    const bool dominated = dc <= c2 + 1e-9 * (1.0 + c2) && dm <= c1 + 1e-9 * (1.0 + c1);
    undominated += dominated ? 0 : 1;
    sup_cubic = std::max(sup_cubic, dc);
    sup_mult = std::max(sup_mult, dm);
    csv << i << ',' << format_number(norm(x)) << ',' << format_number(norm(y)) << ',' << format_number(dc) << ','
        << format_number(dm) << ',' << format_number(c1) << ',' << format_number(c2) << ','
        << (dominated ? "true" : "false") << '\n';
  }
  out << "defect sample\n"
      << "  algebra            " << f.algebra().id() << '\n'
      << "  map                " << f.describe() << '\n'
      << "  probes             " << pairs.size() << " (radius " << format_number(cfg.probes.radius) << ", seed "
      << cfg.probes.seed << ")\n"
      << "  sup mult defect    " << format_number(sup_mult) << '\n'
      << "  sup cubic defect   " << format_number(sup_cubic) << '\n'
      << "  dominated          " << pairs.size() - undominated << "/" << pairs.size() << '\n';
  if (csv_path && !detail::write_file(*csv_path, csv.str(), err)) return kConfigError;
  return undominated == 0 ? kOk : kBoundViolation;
}

/// Defect sampling only: sup estimates and a per-probe domination check.
inline int cmd_defects(const std::string& path, const Overrides& o, std::ostream& out, std::ostream& err) {
  auto cfg = detail::load_config(path, err);
  if (!cfg) return kConfigError;
  return defects_config(std::move(*cfg), o, out, err);
}

}  // namespace hyers::cli

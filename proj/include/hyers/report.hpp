#pragma once

// Text and CSV renderings of stability reports and iteration traces.
// Numbers are printed with %.10g; column order is fixed.

#include <cstdio>
#include <ostream>
#include <string>

#include "hyers/iteration.hpp"
#include "hyers/verify.hpp"

namespace hyers {

inline constexpr const char* kReportCsvHeader =
    "probe_index,norm_x,defect_cubic,defect_mult,psi,bound,err_Tf,bound_ok";
inline constexpr const char* kTraceCsvHeader = "n,gap,norm_Tn";

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline void write_report_csv(std::ostream& os, const StabilityReport& rep) {
  os << kReportCsvHeader << '\n';
  for (const auto& r : rep.records) {
    os << r.index << ',' << format_number(r.norm_x) << ',' << format_number(r.defect_cubic) << ','
       << format_number(r.defect_mult) << ',' << format_number(r.psi) << ',' << format_number(r.bound) << ','
       << format_number(r.err_Tf) << ',' << (r.bound_ok ? "true" : "false") << '\n';
  }
}

inline void write_trace_csv(std::ostream& os, const IterationTrace& trace) {
  os << kTraceCsvHeader << '\n';
  for (const auto& s : trace.steps) {
    os << s.n << ',' << format_number(s.gap) << ',' << format_number(norm(s.value)) << '\n';
  }
}

inline void write_report_text(std::ostream& os, const StabilityReport& rep) {
  std::size_t ok = 0;
  double max_bound = 0.0, max_psi = 0.0;
  for (const auto& r : rep.records) {
    ok += r.bound_ok ? 1 : 0;
    max_bound = std::max(max_bound, r.bound);
    max_psi = std::max(max_psi, r.psi);
  }
  os << "stability report\n"
     << "  algebra            " << rep.algebra << '\n'
     << "  map                " << rep.map_summary << '\n'
     << "  phi1               " << rep.phi1 << '\n'
     << "  phi2               " << rep.phi2 << '\n'
     << "  method             " << to_string(rep.method) << '\n'
     << "  tol / n_max        " << format_number(rep.settings.tol) << " / " << rep.settings.n_max << '\n'
     << "  probes             " << rep.records.size() << " (radius " << format_number(rep.probes.radius)
     << ", seed " << rep.probes.seed << ")\n"
     << "  max Psi(x,0)       " << format_number(max_psi) << '\n'
     << "  max Psi(x,0)/16    " << format_number(max_bound) << '\n'
     << "  max |T(x)-f(x)|    " << format_number(rep.max_err_Tf()) << '\n'
     << "  bound holds        " << ok << "/" << rep.records.size() << '\n';
  if (auto bad = rep.first_violation()) os << "  first violation    probe " << *bad << '\n';
  os << "  cubic residual T   " << format_number(rep.max_cubic_residual) << '\n'
     << "  mult residual T    " << format_number(rep.max_mult_residual) << '\n'
     << "  uniqueness gap     " << format_number(rep.uniqueness) << '\n'
     << "  max converged_at   " << rep.max_converged_at() << '\n'
     << "  superstability     " << rep.superstability.summary() << '\n';
  if (rep.warnings.empty()) {
    os << "  warnings           none\n";
  } else {
    for (const auto& w : rep.warnings) os << "  warning            " << w << '\n';
  }
}

}  // namespace hyers

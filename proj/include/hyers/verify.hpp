#pragma once

// Stability reports: Ψ-based error bounds on probes, residuals of the
// approximant T in the cubic and multiplicative equations, uniqueness
// cross-checks, and superstability verdicts.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "hyers/algebra.hpp"
#include "hyers/control.hpp"
#include "hyers/iteration.hpp"
#include "hyers/maps.hpp"

namespace hyers {

struct ReportTolerances {
  double bound_slack = 1e-9;   // bound_ok ⇔ ‖T(x) − f(x)‖ ≤ Ψ(x,0)/16 + bound_slack
  double superstable = 1e-9;   // ‖f − T‖, ‖f(0)‖ and homogeneity must stay below this
  double residual = 1e-8;      // acceptable cubic / multiplicative residual of T
  double domination = 1e-9;    // slack when checking φ ≥ measured defect
};

struct ProbeRecord {
  std::size_t index = 0;
  double norm_x = 0.0;
  double defect_cubic = 0.0;
  double defect_mult = 0.0;
  double psi = 0.0;    // Ψ(x, 0)
  double bound = 0.0;  // Ψ(x, 0) / 16
  double err_Tf = 0.0;
  bool bound_ok = false;
  bool dominated = true;  // φ2(x, y) covers the measured cubic defect
  int converged_at = 0;
};

/// Failure while processing one probe; names the probe and wraps the cause.
class ProbeFailure : public Error {
 public:
  ProbeFailure(std::size_t index, const std::string& cause)
      : Error("probe " + std::to_string(index) + ": " + cause), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

struct BoundCheck {
  std::vector<ProbeRecord> records;
  std::vector<std::string> warnings;

  bool all_ok() const {
    return std::all_of(records.begin(), records.end(), [](const ProbeRecord& r) { return r.bound_ok; });
  }
};

/// Per-probe comparison of ‖T(x) − f(x)‖ against Ψ(x,0)/16, Ψ summed in T's direction.
inline BoundCheck check_bound(const MapSpec& f, const CubicApproximant& T, const ControlFunction& phi2,
                              const std::vector<ProbePair>& probes, const ReportTolerances& tol = {}) {
  BoundCheck out;
  out.records.reserve(probes.size());
  const Element zero = Element::zero(f.algebra());
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const auto& [x, y] = probes[i];
    ProbeRecord r;
    r.index = i;
    r.norm_x = norm(x);
    r.defect_cubic = cubic_defect(f, x, y);
    r.defect_mult = mult_defect(f, x, y);
    try {
      const IterationResult it = T.evaluate(x);
      r.converged_at = it.trace.converged_at.value_or(-1);
      r.err_Tf = distance(it.value, f(x));
      r.psi = psi(phi2, x, zero, T.method()).value;
    } catch (const Error& e) {
      throw ProbeFailure(i, e.what());
    }
    r.bound = r.psi / 16.0;
    r.bound_ok = r.err_Tf <= r.bound + tol.bound_slack;
    const double cover = phi2(x, y);
    r.dominated = r.defect_cubic <= cover + tol.domination * (1.0 + cover);
    if (!r.dominated) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "probe %zu: phi2 = %.10g does not dominate cubic defect %.10g", i, cover,
                    r.defect_cubic);
      out.warnings.emplace_back(buf);
    }
    out.records.push_back(r);
  }
  return out;
}

/// max ‖g(2x+y) + g(2x−y) − 2g(x+y) − 2g(x−y) − 12g(x)‖ over the pairs.
template <class Map>
double check_cubic_residual(const Map& g, const std::vector<ProbePair>& pairs) {
  double worst = 0.0;
  for (const auto& [x, y] : pairs) {
    const Element two_x = scale(2.0, x);
    const Element lhs = add(g(add(two_x, y)), g(sub(two_x, y)));
    const Element rhs = add(add(scale(2.0, g(add(x, y))), scale(2.0, g(sub(x, y)))), scale(12.0, g(x)));
    worst = std::max(worst, distance(lhs, rhs));
  }
  return worst;
}

/// max ‖g(xy) − g(x)g(y)‖ over the pairs.
template <class Map>
double check_mult_residual(const Map& g, const std::vector<ProbePair>& pairs) {
  double worst = 0.0;
  for (const auto& [x, y] : pairs) worst = std::max(worst, distance(g(mul(x, y)), mul(g(x), g(y))));
  return worst;
}

/// max ‖g(2^n x) − 8^n g(x)‖ over the points.
template <class Map>
double check_homogeneity(const Map& g, const std::vector<Element>& points, int n) {
  if (n < 1) throw std::invalid_argument("check_homogeneity: n must be >= 1");
  double worst = 0.0;
  for (const Element& x : points) {
    const Element lhs = g(scale(std::ldexp(1.0, n), x));
    const Element rhs = scale(std::ldexp(1.0, 3 * n), g(x));
    worst = std::max(worst, distance(lhs, rhs));
  }
  return worst;
}

/// max ‖T1(x) − T2(x)‖ over the points.
template <class MapA, class MapB>
double uniqueness_check(const MapA& t1, const MapB& t2, const std::vector<Element>& points) {
  double worst = 0.0;
  for (const Element& x : points) worst = std::max(worst, distance(t1(x), t2(x)));
  return worst;
}

inline std::vector<Element> first_points(const std::vector<ProbePair>& pairs) {
  std::vector<Element> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(p.x);
  return out;
}

enum class Verdict { Superstable, Counterexample, NotApplicable };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Superstable: return "superstable";
    case Verdict::Counterexample: return "counterexample";
    case Verdict::NotApplicable: return "not-applicable";
  }
  return "";
}

struct SuperstabilityResult {
  Verdict verdict = Verdict::NotApplicable;
  std::string reason;
  /// max ‖f(x) − T(x)‖ over probes, when T could be built.
  std::optional<double> max_f_minus_T;
  std::string note;

  std::string summary() const {
    std::string s = to_string(verdict);
    if (!reason.empty()) s += ": " + reason;
    if (!note.empty()) s += "; note: " + note;
    return s;
  }
};

namespace detail {

inline std::string num10(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline std::optional<std::string> superstability_blocker(const MapSpec& f, const ControlFunction& phi1,
                                                        const ControlFunction& phi2, Direction method,
                                                        const std::vector<ProbePair>& probes,
                                                        const ReportTolerances& tol) {
  const Element zero = Element::zero(f.algebra());
  for (const auto& [x, y] : probes) {
    const double v = phi2(x, zero);
    if (v > 0.0) return "phi2(x,0) = " + num10(v) + " != 0";
  }
  if (!series_converges(phi2, method)) {
    return "phi2 = " + phi2.describe() + " has no convergent " + to_string(method) + " series";
  }
  for (const auto& [x, y] : probes) {
    const VanishingCheck vc = phi1_vanishing_check(phi1, method, x, y);
    if (!vc.holds) return "phi1 = " + phi1.describe() + " fails the vanishing condition (" + vc.witness + ")";
  }
  for (const auto& [x, y] : probes) {
    for (const Element* yy : {&y, &zero}) {
      const double c2 = phi2(x, *yy);
      const double d2 = cubic_defect(f, x, *yy);
      if (d2 > c2 + tol.domination * (1.0 + c2)) {
        return "cubic defect " + num10(d2) + " exceeds phi2 = " + num10(c2);
      }
      const double c1 = phi1(x, *yy);
      const double d1 = mult_defect(f, x, *yy);
      if (d1 > c1 + tol.domination * (1.0 + c1)) {
        return "multiplicative defect " + num10(d1) + " exceeds phi1 = " + num10(c1);
      }
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Structural trigger: φ2(x,0) ≡ 0 on the probes. With the trigger, a
/// vanishing φ1 and dominated defects, f must coincide with T.
inline SuperstabilityResult superstability_check(const MapSpec& f, const ControlFunction& phi1,
                                                 const ControlFunction& phi2, Direction method,
                                                 const std::vector<ProbePair>& probes,
                                                 const IterationSettings& settings = {},
                                                 const ReportTolerances& tol = {}) {
  SuperstabilityResult out;
  const auto points = first_points(probes);
  const CubicApproximant T(f, method, settings);
  try {
    out.max_f_minus_T = uniqueness_check(f, T, points);
  } catch (const IterationError& e) {
    out.note = std::string("T not available: ") + e.what();
  }

  if (auto blocker = detail::superstability_blocker(f, phi1, phi2, method, probes, tol)) {
    out.verdict = Verdict::NotApplicable;
    out.reason = *blocker;
    if (out.max_f_minus_T && *out.max_f_minus_T > tol.superstable) {
      out.note = "max ||f - T|| = " + detail::num10(*out.max_f_minus_T) + " > 0, f is not a cubic homomorphism";
    }
    return out;
  }

  const double f0 = norm(f(Element::zero(f.algebra())));
  double homog_scale = 0.0;
  for (const Element& x : points) homog_scale = std::max(homog_scale, norm(f(x)));
  const double homog = check_homogeneity(f, points, 1);
  if (!out.max_f_minus_T) {
    out.verdict = Verdict::Counterexample;
    out.reason = "controls claim superstability but T does not exist";
  } else if (f0 > tol.superstable) {
    out.verdict = Verdict::Counterexample;
    out.reason = "f(0) != 0 (||f(0)|| = " + detail::num10(f0) + ")";
  } else if (homog > tol.superstable * (1.0 + 8.0 * homog_scale)) {
    out.verdict = Verdict::Counterexample;
    out.reason = "f(2x) != 8 f(x) (max gap " + detail::num10(homog) + ")";
  } else if (*out.max_f_minus_T > tol.superstable) {
    out.verdict = Verdict::Counterexample;
    out.reason = "max ||f - T|| = " + detail::num10(*out.max_f_minus_T);
  } else {
    out.verdict = Verdict::Superstable;
    out.note = "max ||f - T|| = " + detail::num10(*out.max_f_minus_T);
  }
  return out;
}

struct StabilityReport {
  std::string algebra;
  std::string map_summary;
  std::string phi1;
  std::string phi2;
  Direction method = Direction::Forward;
  IterationSettings settings;
  ProbeSpec probes;
  ReportTolerances tolerances;

  std::vector<ProbeRecord> records;
  std::vector<std::string> warnings;
  double max_cubic_residual = 0.0;
  double max_mult_residual = 0.0;
  double uniqueness = 0.0;  // T at tol vs T at tol/100
  SuperstabilityResult superstability;

  bool all_bound_ok() const {
    return std::all_of(records.begin(), records.end(), [](const ProbeRecord& r) { return r.bound_ok; });
  }
  std::optional<std::size_t> first_violation() const {
    for (const auto& r : records) {
      if (!r.bound_ok) return r.index;
    }
    return std::nullopt;
  }
  double max_err_Tf() const {
    double m = 0.0;
    for (const auto& r : records) m = std::max(m, r.err_Tf);
    return m;
  }
  int max_converged_at() const {
    int m = 0;
    for (const auto& r : records) m = std::max(m, r.converged_at);
    return m;
  }
  bool residuals_ok() const {
    return max_cubic_residual < tolerances.residual && max_mult_residual < tolerances.residual;
  }
};

/// Full report for f with controls (φ1, φ2) on probes drawn from spec.
/// Throws ProbeFailure when Ψ diverges or the iteration fails on a probe.
inline StabilityReport assemble_report(const MapSpec& f, const ControlFunction& phi1, const ControlFunction& phi2,
                                       Direction method, const IterationSettings& settings,
                                       const ProbeSpec& spec, const ReportTolerances& tol = {}) {
  StabilityReport rep;
  rep.algebra = f.algebra().id();
  rep.map_summary = f.describe();
  rep.phi1 = phi1.describe();
  rep.phi2 = phi2.describe();
  rep.method = method;
  rep.settings = settings;
  rep.probes = spec;
  rep.tolerances = tol;

  const auto pairs = probe_pairs(f.algebra(), spec);
  const CubicApproximant T(f, method, settings);
  BoundCheck bc = check_bound(f, T, phi2, pairs, tol);
  rep.records = std::move(bc.records);
  rep.warnings = std::move(bc.warnings);

  rep.max_cubic_residual = check_cubic_residual(T, pairs);
  rep.max_mult_residual = check_mult_residual(T, pairs);

  IterationSettings tighter = settings;
  tighter.tol = settings.tol / 100.0;
  tighter.n_max = settings.n_max + 10;
  rep.uniqueness = uniqueness_check(T, CubicApproximant(f, method, tighter), first_points(pairs));

  rep.superstability = superstability_check(f, phi1, phi2, method, pairs, settings, tol);
  return rep;
}

inline constexpr ProbeSpec kPaperExampleProbes{1.0, 20080101, 100};

/// The worked example: f(x) = x³ + a on strict-upper-4x4, φ1 ≡ 4, φ2 ≡ 56, forward.
inline StabilityReport run_paper_example(const IterationSettings& settings = {},
                                         const ProbeSpec& spec = kPaperExampleProbes,
                                         const ReportTolerances& tol = {}) {
  return assemble_report(MapSpec::paper_example(), ControlFunction::constant(4.0), ControlFunction::constant(56.0),
                         Direction::Forward, settings, spec, tol);
}

}  // namespace hyers

#pragma once

// Direct-method iterators for the cubic approximant T of a map f.
//
//   forward   T_n(x) = f(2^n x) / 8^n
//   backward  T_n(x) = 8^n f(x / 2^n)
//
// Stopping rule: the first n with ‖T_{n+1}(x) − T_n(x)‖ < tol returns
// T_{n+1}(x). Arguments are rescaled by repeated doubling or halving, and
// 8^{±n} is applied with ldexp, so the rescaling itself is exact.

#include <cmath>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hyers/algebra.hpp"
#include "hyers/control.hpp"
#include "hyers/errors.hpp"
#include "hyers/maps.hpp"

namespace hyers {

struct IterationSettings {
  int n_max = 40;
  double tol = 1e-10;
  double guard = 1e100;

  void validate() const {
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    if (!(tol > 0.0)) throw std::invalid_argument("iteration tol must be positive");
    if (!(guard > 0.0)) throw std::invalid_argument("guard must be positive");
  }

  friend bool operator==(const IterationSettings&, const IterationSettings&) = default;
};

struct IterationStep {
  int n;
  Element value;  // T_n(x)
  double gap;     // ‖T_{n+1}(x) − T_n(x)‖
};

struct IterationTrace {
  Direction method = Direction::Forward;
  std::vector<IterationStep> steps;
  std::optional<int> converged_at;

  double last_gap() const { return steps.empty() ? 0.0 : steps.back().gap; }
};

/// Iteration failure with the trace up to the failing step attached.
class IterationError : public Error {
 public:
  IterationError(const std::string& msg, IterationTrace trace) : Error(msg), trace_(std::move(trace)) {}
  const IterationTrace& trace() const noexcept { return trace_; }

 private:
  IterationTrace trace_;
};

class NonConvergent : public IterationError {
 public:
  NonConvergent(int n_max, double last_gap, IterationTrace trace)
      : IterationError(message(n_max, last_gap, trace.method), std::move(trace)),
        n_max_(n_max),
        last_gap_(last_gap) {}
  int n_max() const noexcept { return n_max_; }
  double last_gap() const noexcept { return last_gap_; }

 private:
  static std::string message(int n_max, double gap, Direction d) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "NonConvergent: %s iteration did not converge in %d steps (last gap %.6g)",
                  to_string(d), n_max, gap);
    return buf;
  }
  int n_max_;
  double last_gap_;
};

class Overflow : public IterationError {
 public:
  Overflow(int n, double magnitude, IterationTrace trace)
      : IterationError(message(n, magnitude, trace.method), std::move(trace)), n_(n) {}
  int step() const noexcept { return n_; }

 private:
  static std::string message(int n, double magnitude, Direction d) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "Overflow: %s iteration exceeded guard at n = %d (magnitude %.6g)",
                  to_string(d), n, magnitude);
    return buf;
  }
  int n_;
};

struct IterationResult {
  Element value;
  IterationTrace trace;
};

namespace detail {

inline void check_guard(const Element& e, int n, double guard, const IterationTrace& trace) {
  const double m = e.max_abs_coeff();
  if (!(m <= guard)) throw Overflow(n, m, trace);
}

inline IterationResult iterate(const MapSpec& f, const Element& x, const IterationSettings& s, Direction dir) {
  s.validate();
  IterationTrace trace;
  trace.method = dir;
  const double step = dir == Direction::Forward ? 2.0 : 0.5;
  // T_n = 2^{shift·n} f(x_n)
  const int shift = dir == Direction::Forward ? -3 : 3;

  Element xn = x;
  Element fx = f(xn);
  check_guard(fx, 0, s.guard, trace);
  Element tn = fx;
  for (int n = 0; n < s.n_max; ++n) {
    xn = scale(step, xn);
    check_guard(xn, n + 1, s.guard, trace);
    fx = f(xn);
    check_guard(fx, n + 1, s.guard, trace);
    Element next = scale(std::ldexp(1.0, shift * (n + 1)), fx);
    check_guard(next, n + 1, s.guard, trace);
    const double gap = distance(next, tn);
    trace.steps.push_back({n, tn, gap});
    if (gap < s.tol) {
      trace.converged_at = n;
      return {std::move(next), std::move(trace)};
    }
    tn = std::move(next);
  }
  const double last = trace.last_gap();
  throw NonConvergent(s.n_max, last, std::move(trace));
}

}  // namespace detail

inline IterationResult iterate_forward(const MapSpec& f, const Element& x, const IterationSettings& s = {}) {
  return detail::iterate(f, x, s, Direction::Forward);
}

inline IterationResult iterate_backward(const MapSpec& f, const Element& x, const IterationSettings& s = {}) {
  return detail::iterate(f, x, s, Direction::Backward);
}

/// T as an evaluator over (f, method, settings). Evaluation is deterministic.
class CubicApproximant {
 public:
  CubicApproximant(MapSpec f, Direction method, IterationSettings settings = {})
      : f_(std::move(f)), method_(method), settings_(settings) {
    settings_.validate();
  }

  const MapSpec& source() const noexcept { return f_; }
  Direction method() const noexcept { return method_; }
  const IterationSettings& settings() const noexcept { return settings_; }
  const AlgebraDescriptor& algebra() const noexcept { return f_.algebra(); }

  IterationResult evaluate(const Element& x) const { return detail::iterate(f_, x, settings_, method_); }
  Element operator()(const Element& x) const { return evaluate(x).value; }

 private:
  MapSpec f_;
  Direction method_;
  IterationSettings settings_;
};

inline CubicApproximant build_approximant(const MapSpec& f, Direction method, const IterationSettings& s = {}) {
  return CubicApproximant(f, method, s);
}

}  // namespace hyers

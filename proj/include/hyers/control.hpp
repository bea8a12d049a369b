#pragma once

// Control functions φ(x, y), which depend on x and y only through ‖x‖ and ‖y‖,
// and the rescaled series
//   forward   Ψ(x,y) = Σ_{i≥0} φ(2^i x, 2^i y) / 8^i
//   backward  Ψ(x,y) = Σ_{i≥1} 8^i φ(x/2^i, y/2^i)
//
// Powers follow the convention 0^p = 0 for every p, so a vanishing norm
// contributes nothing to a power term even when p ≤ 0.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "hyers/algebra.hpp"
#include "hyers/errors.hpp"

namespace hyers {

enum class Direction { Forward, Backward };

inline const char* to_string(Direction d) { return d == Direction::Forward ? "forward" : "backward"; }

/// t^p with 0^p = 0.
inline double pow0(double t, double p) { return t == 0.0 ? 0.0 : std::pow(t, p); }

namespace control {

struct Constant {
  double theta;
};
/// θ(‖x‖^p + ‖y‖^p)
struct SumPowers {
  double theta;
  double p;
};
/// θ‖x‖^q‖y‖^p
struct ProductPowers {
  double theta;
  double q;
  double p;
};
/// θ‖y‖^p
struct PowerOfY {
  double theta;
  double p;
};

/// Step function over a grid of (‖x‖, ‖y‖) breakpoints. A query (s, t) reads
/// the cell whose upper corner is the first breakpoint pair ≥ (s, t).
///
/// rho is the certified per-step ratio in the summation direction:
/// forward φ(2u) ≤ ρ·φ(u), backward φ(u/2) ≤ ρ·φ(u).
struct Tabulated {
  std::vector<double> x_breaks;
  std::vector<double> y_breaks;
  std::vector<double> values;  // row-major, x_breaks.size() × y_breaks.size()
  double rho = 1.0;
  bool extrapolate = false;
};

}  // namespace control

class ControlFunction {
 public:
  using Kind = std::variant<control::Constant, control::SumPowers, control::ProductPowers,
                            control::PowerOfY, control::Tabulated>;

  static ControlFunction constant(double theta) { return ControlFunction(control::Constant{theta}); }
  static ControlFunction sum_powers(double theta, double p) {
    return ControlFunction(control::SumPowers{theta, p});
  }
  static ControlFunction product_powers(double theta, double q, double p) {
    return ControlFunction(control::ProductPowers{theta, q, p});
  }
  static ControlFunction power_of_y(double theta, double p) {
    return ControlFunction(control::PowerOfY{theta, p});
  }
  static ControlFunction tabulated(control::Tabulated table) { return ControlFunction(std::move(table)); }

  const Kind& kind() const noexcept { return kind_; }
  bool is_tabulated() const noexcept { return std::holds_alternative<control::Tabulated>(kind_); }

  /// Homogeneity degree d with φ(2u) = 2^d φ(u); none for tabulated controls.
  std::optional<double> degree() const {
    return std::visit(
        [](const auto& k) -> std::optional<double> {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, control::Constant>) return 0.0;
          else if constexpr (std::is_same_v<T, control::SumPowers>) return k.p;
          else if constexpr (std::is_same_v<T, control::ProductPowers>) return k.q + k.p;
          else if constexpr (std::is_same_v<T, control::PowerOfY>) return k.p;
          else return std::nullopt;
        },
        kind_);
  }

  /// φ evaluated from the two norms.
  double at_norms(double nx, double ny) const {
    return std::visit(
        [&](const auto& k) -> double {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, control::Constant>) return k.theta;
          else if constexpr (std::is_same_v<T, control::SumPowers>) return k.theta * (pow0(nx, k.p) + pow0(ny, k.p));
          else if constexpr (std::is_same_v<T, control::ProductPowers>) return k.theta * pow0(nx, k.q) * pow0(ny, k.p);
          else if constexpr (std::is_same_v<T, control::PowerOfY>) return k.theta * pow0(ny, k.p);
          else return lookup(k, nx, ny);
        },
        kind_);
  }

  double operator()(const Element& x, const Element& y) const { return at_norms(norm(x), norm(y)); }

  /// Text form accepted by the configuration parser, e.g. "sum_powers(2, 1.5)".
  std::string describe() const {
    // Shortest text that reads back to the same double.
    auto num = [](double v) {
      char buf[40];
      const auto res = std::to_chars(buf, buf + sizeof buf, v);
      return std::string(buf, res.ptr);
    };
    return std::visit(
        [&](const auto& k) -> std::string {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, control::Constant>) return "constant(" + num(k.theta) + ")";
          else if constexpr (std::is_same_v<T, control::SumPowers>)
            return "sum_powers(" + num(k.theta) + ", " + num(k.p) + ")";
          else if constexpr (std::is_same_v<T, control::ProductPowers>)
            return "product_powers(" + num(k.theta) + ", " + num(k.q) + ", " + num(k.p) + ")";
          else if constexpr (std::is_same_v<T, control::PowerOfY>)
            return "power_of_y(" + num(k.theta) + ", " + num(k.p) + ")";
          else
            return "tabulated(" + std::to_string(k.x_breaks.size()) + "x" +
                   std::to_string(k.y_breaks.size()) + ", rho=" + num(k.rho) + ")";
        },
        kind_);
  }

  friend bool operator==(const ControlFunction& a, const ControlFunction& b) {
    return a.describe() == b.describe() && a.is_tabulated() == b.is_tabulated() &&
           (!a.is_tabulated() || tables_equal(std::get<control::Tabulated>(a.kind_),
                                             std::get<control::Tabulated>(b.kind_)));
  }

 private:
  explicit ControlFunction(Kind k) : kind_(std::move(k)) { validate(); }

  static bool tables_equal(const control::Tabulated& a, const control::Tabulated& b) {
    return a.x_breaks == b.x_breaks && a.y_breaks == b.y_breaks && a.values == b.values &&
           a.rho == b.rho && a.extrapolate == b.extrapolate;
  }

  void validate() const {
    std::visit(
        [](const auto& k) {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, control::Tabulated>) {
            if (k.x_breaks.empty() || k.y_breaks.empty()) throw std::invalid_argument("tabulated control needs breakpoints");
            if (k.values.size() != k.x_breaks.size() * k.y_breaks.size()) {
              throw std::invalid_argument("tabulated control: values size does not match grid");
            }
            if (!std::is_sorted(k.x_breaks.begin(), k.x_breaks.end()) ||
                !std::is_sorted(k.y_breaks.begin(), k.y_breaks.end())) {
              throw std::invalid_argument("tabulated control: breakpoints must ascend");
            }
            for (double v : k.values) {
              if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("tabulated control: values must be finite and >= 0");
            }
            if (!(k.rho > 0.0) || !std::isfinite(k.rho)) throw std::invalid_argument("tabulated control: rho must be positive");
          } else {
            if (!(k.theta >= 0.0) || !std::isfinite(k.theta)) throw std::invalid_argument("control theta must be finite and >= 0");
          }
        },
        kind_);
  }

  static double lookup(const control::Tabulated& t, double nx, double ny) {
    double factor = 1.0;
    if (!std::isfinite(nx) || !std::isfinite(ny)) throw OutOfTable("tabulated control queried at a non-finite norm");
    if (nx > t.x_breaks.back() || ny > t.y_breaks.back()) {
      if (!t.extrapolate) throw OutOfTable("tabulated control queried outside its grid");
      // Halve into the grid, paying rho per halving.
      while (nx > t.x_breaks.back() || ny > t.y_breaks.back()) {
        nx *= 0.5;
        ny *= 0.5;
        factor *= t.rho;
      }
    }
    const auto ix = static_cast<std::size_t>(
        std::lower_bound(t.x_breaks.begin(), t.x_breaks.end(), nx) - t.x_breaks.begin());
    const auto iy = static_cast<std::size_t>(
        std::lower_bound(t.y_breaks.begin(), t.y_breaks.end(), ny) - t.y_breaks.begin());
    return factor * t.values[ix * t.y_breaks.size() + iy];
  }

  Kind kind_;
};

/// Value of a Ψ series. Closed forms carry terms_used = 0 and tail_bound = 0.
struct SeriesValue {
  double value = 0.0;
  int terms_used = 0;
  double tail_bound = 0.0;
  bool closed_form = false;
};

inline constexpr double kDefaultSeriesTol = 1e-10;

/// Whether the Ψ series of a power family converges in the given direction.
/// Tabulated controls converge when their declared ratio is small enough.
inline bool series_converges(const ControlFunction& phi, Direction dir) {
  if (auto d = phi.degree()) return dir == Direction::Forward ? *d < 3.0 : *d > 3.0;
  const double rho = std::get<control::Tabulated>(phi.kind()).rho;
  return dir == Direction::Forward ? rho < 8.0 : 8.0 * rho < 1.0;
}

namespace detail {

inline std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline SeriesValue psi_closed(const ControlFunction& phi, double nx, double ny, Direction dir) {
  const double v = phi.at_norms(nx, ny);
  if (v == 0.0) return {0.0, 0, 0.0, true};
  const double d = *phi.degree();
  if (dir == Direction::Forward) {
    const double r = std::exp2(d - 3.0);
    if (!(d < 3.0)) {
      throw DivergentSeries("forward series of " + phi.describe() + " diverges: homogeneity degree " +
                            fmt_num(d) + " >= 3 (term ratio 2^(p-3) = " + fmt_num(r) + ")");
    }
    return {v / (1.0 - r), 0, 0.0, true};
  }
  const double r = std::exp2(3.0 - d);
  if (!(d > 3.0)) {
    throw DivergentSeries("backward series of " + phi.describe() + " diverges: homogeneity degree " +
                          fmt_num(d) + " <= 3 (term ratio 2^(3-p) = " + fmt_num(r) + ")");
  }
  return {v * r / (1.0 - r), 0, 0.0, true};
}

inline SeriesValue psi_truncated(const ControlFunction& phi, double nx, double ny, Direction dir, double tol) {
  const double rho = std::get<control::Tabulated>(phi.kind()).rho;
  const double r = dir == Direction::Forward ? rho / 8.0 : 8.0 * rho;
  if (!(r < 1.0)) {
    throw DivergentSeries(std::string(to_string(dir)) + " series of " + phi.describe() +
                          " diverges: declared ratio gives term ratio " + fmt_num(r) + " >= 1");
  }
  constexpr int kMaxTerms = 4096;
  SeriesValue out;
  // Forward starts at i = 0 with weight 1, backward at i = 1 with weight 8.
  double sx = nx, sy = ny;
  double weight = 1.0;
  if (dir == Direction::Backward) {
    sx *= 0.5;
    sy *= 0.5;
    weight = 8.0;
  }
  for (int i = 0; i < kMaxTerms; ++i) {
    const double term = weight * phi.at_norms(sx, sy);
    out.value += term;
    out.terms_used = i + 1;
    out.tail_bound = term * r / (1.0 - r);
    if (out.tail_bound <= tol) return out;
    if (dir == Direction::Forward) {
      sx *= 2.0;
      sy *= 2.0;
      weight /= 8.0;
    } else {
      sx *= 0.5;
      sy *= 0.5;
      weight *= 8.0;
    }
  }
  throw DivergentSeries("series of " + phi.describe() + " did not reach tolerance in " +
                        std::to_string(kMaxTerms) + " terms; table violates its declared ratio");
}

}  // namespace detail

inline SeriesValue psi(const ControlFunction& phi, const Element& x, const Element& y, Direction dir,
                       double tol = kDefaultSeriesTol) {
  if (!(tol > 0.0)) throw std::invalid_argument("series tolerance must be positive");
  if (phi.is_tabulated()) return detail::psi_truncated(phi, norm(x), norm(y), dir, tol);
  return detail::psi_closed(phi, norm(x), norm(y), dir);
}

inline SeriesValue psi_forward(const ControlFunction& phi, const Element& x, const Element& y,
                               double tol = kDefaultSeriesTol) {
  return psi(phi, x, y, Direction::Forward, tol);
}

inline SeriesValue psi_backward(const ControlFunction& phi, const Element& x, const Element& y,
                                double tol = kDefaultSeriesTol) {
  return psi(phi, x, y, Direction::Backward, tol);
}

struct VanishingCheck {
  bool holds = false;
  /// Decisive per-step ratio (2^(d-6) forward, 2^(6-d) backward); NaN for a zero value.
  double ratio = 0.0;
  std::string witness;
};

/// Does φ1(2^n x, 2^n y)/2^{6n} → 0 (forward) or 2^{6n} φ1(x/2^n, y/2^n) → 0 (backward)?
inline VanishingCheck phi1_vanishing_check(const ControlFunction& phi1, Direction dir, const Element& x,
                                           const Element& y) {
  if (auto d = phi1.degree()) {
    if (phi1(x, y) == 0.0) return {true, std::nan(""), "phi1(x,y) = 0, every rescaled term vanishes"};
    if (dir == Direction::Forward) {
      const double r = std::exp2(*d - 6.0);
      return {*d < 6.0, r, "ratio 2^(d-6) = " + detail::fmt_num(r) + " with degree " + detail::fmt_num(*d)};
    }
    const double r = std::exp2(6.0 - *d);
    return {*d > 6.0, r, "ratio 2^(6-d) = " + detail::fmt_num(r) + " with degree " + detail::fmt_num(*d)};
  }

  // Numeric probe for tabulated controls, n = 0..40.
  constexpr int kSteps = 40;
  std::vector<double> seq;
  try {
    double nx = norm(x), ny = norm(y);
    for (int n = 0; n <= kSteps; ++n) {
      const double v = phi1.at_norms(nx, ny);
      seq.push_back(dir == Direction::Forward ? std::ldexp(v, -6 * n) : std::ldexp(v, 6 * n));
      const double step = dir == Direction::Forward ? 2.0 : 0.5;
      nx *= step;
      ny *= step;
    }
  } catch (const OutOfTable&) {
    return {false, std::nan(""), "inconclusive"};
  }
  bool monotone = true;
  for (int n = kSteps / 2; n < kSteps; ++n) monotone = monotone && seq[n + 1] <= seq[n];
  const double scale = std::max(1.0, seq.front());
  if (monotone && seq.back() <= 1e-12 * scale) {
    const double r = seq[kSteps - 1] > 0.0 ? seq[kSteps] / seq[kSteps - 1] : 0.0;
    return {true, r, "term 40 = " + detail::fmt_num(seq.back()) + ", last ratio " + detail::fmt_num(r)};
  }
  return {false, std::nan(""), "inconclusive"};
}

}  // namespace hyers

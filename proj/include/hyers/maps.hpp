#pragma once

// Candidate maps f(x) = c1·x + c2·x² + c3·x³ (+ c4·x⁴ on real-line) + k and
// the two defect functionals
//   multiplicative  ‖f(xy) − f(x)f(y)‖
//   cubic           ‖f(2x+y) + f(2x−y) − 2f(x+y) − 2f(x−y) − 12f(x)‖

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "hyers/algebra.hpp"

namespace hyers {

class MapSpec {
 public:
  MapSpec(AlgebraDescriptor algebra, double c1, double c2, double c3, Element k, double c4 = 0.0)
      : algebra_(std::move(algebra)), c1_(c1), c2_(c2), c3_(c3), c4_(c4), k_(std::move(k)) {
    if (!(k_.algebra() == algebra_)) {
      throw AlgebraMismatch("map constant lives in " + k_.algebra().id() + ", map in " + algebra_.id());
    }
    for (double c : {c1_, c2_, c3_, c4_}) {
      if (!std::isfinite(c)) throw std::invalid_argument("map coefficient is not finite");
    }
    if (c4_ != 0.0 && algebra_.mul_rule() != MulRule::RealLine) {
      throw std::invalid_argument("x^4 term requires real-line");
    }
  }

  /// f(x) = c·x³.
  static MapSpec cubic(const AlgebraDescriptor& algebra, double c = 1.0) {
    return {algebra, 0.0, 0.0, c, Element::zero(algebra)};
  }
  /// f(x) = x³ + k.
  static MapSpec cubic_plus(const Element& k) { return {k.algebra(), 0.0, 0.0, 1.0, k}; }
  static MapSpec zero_map(const AlgebraDescriptor& algebra) {
    return {algebra, 0.0, 0.0, 0.0, Element::zero(algebra)};
  }
  /// The worked example f(x) = x³ + a on strict-upper-4x4.
  static MapSpec paper_example() { return cubic_plus(paper_constant_a()); }

  const AlgebraDescriptor& algebra() const noexcept { return algebra_; }
  double c1() const noexcept { return c1_; }
  double c2() const noexcept { return c2_; }
  double c3() const noexcept { return c3_; }
  double c4() const noexcept { return c4_; }
  const Element& constant() const noexcept { return k_; }

  Element operator()(const Element& x) const { return eval(x); }

  Element eval(const Element& x) const {
    if (!(x.algebra() == algebra_)) {
      throw AlgebraMismatch("eval: map on " + algebra_.id() + ", argument in " + x.algebra().id());
    }
    const Element x2 = mul(x, x);
    const Element x3 = mul(x2, x);
    Element out = add(add(add(scale(c1_, x), scale(c2_, x2)), scale(c3_, x3)), k_);
    if (c4_ != 0.0) out = add(out, scale(c4_, mul(x3, x)));
    return out;
  }

  std::string describe() const;

  friend bool operator==(const MapSpec&, const MapSpec&) = default;

 private:
  AlgebraDescriptor algebra_;
  double c1_, c2_, c3_, c4_;
  Element k_;
};

inline std::string MapSpec::describe() const {
  std::string s;
  auto term = [&s](double c, const char* name) {
    if (c == 0.0) return;
    if (!s.empty()) s += " + ";
    if (c != 1.0) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.10g*", c);
      s += buf;
    }
    s += name;
  };
  term(c1_, "x");
  term(c2_, "x^2");
  term(c3_, "x^3");
  term(c4_, "x^4");
  if (!k_.is_zero()) {
    if (!s.empty()) s += " + ";
    s += "k";
  }
  return s.empty() ? "0" : s;
}

inline double mult_defect(const MapSpec& f, const Element& x, const Element& y) {
  return distance(f(mul(x, y)), mul(f(x), f(y)));
}

/// Evaluated literally, including at y = 0, so ‖2f(2x) − 16f(x)‖ arises
/// through the generic path.
inline double cubic_defect(const MapSpec& f, const Element& x, const Element& y) {
  const Element two_x = scale(2.0, x);
  const Element lhs = add(f(add(two_x, y)), f(sub(two_x, y)));
  const Element rhs =
      add(add(scale(2.0, f(add(x, y))), scale(2.0, f(sub(x, y)))), scale(12.0, f(x)));
  return distance(lhs, rhs);
}

enum class DefectKind { Mult, Cubic };

inline double defect(const MapSpec& f, DefectKind which, const Element& x, const Element& y) {
  return which == DefectKind::Mult ? mult_defect(f, x, y) : cubic_defect(f, x, y);
}

/// Empirical supremum over the deterministic probe set.
inline double defect_sup_estimate(const MapSpec& f, DefectKind which, const ProbeSpec& probes) {
  if (probes.count == 0) throw std::invalid_argument("defect_sup_estimate: count must be >= 1");
  double best = 0.0;
  for (const auto& [x, y] : probe_pairs(f.algebra(), probes)) {
    best = std::max(best, defect(f, which, x, y));
  }
  return best;
}

}  // namespace hyers

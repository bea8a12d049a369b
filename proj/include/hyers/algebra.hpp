#pragma once

// Finite-dimensional real Banach algebras with flat coefficient storage.
//
// Three families are built in:
//   real-line          dim 1, ordinary product, |x|
//   strict-upper-4x4   dim 6, strictly upper-triangular 4x4 matrices, entrywise l1
//   pointwise-<n>      dim n, coefficientwise product, max norm
//
// strict-upper-4x4 coefficients are the free entries in row-major order of
// positions (1,2),(1,3),(1,4),(2,3),(2,4),(3,4).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hyers/errors.hpp"

namespace hyers {

enum class MulRule { RealLine, StrictUpper4x4, Pointwise };
enum class NormRule { Absolute, EntrywiseL1, MaxPointwise };

class AlgebraDescriptor {
 public:
  static AlgebraDescriptor real_line() { return {MulRule::RealLine, 1}; }
  static AlgebraDescriptor strict_upper_4x4() { return {MulRule::StrictUpper4x4, 6}; }
  static AlgebraDescriptor pointwise(std::size_t n) {
    if (n == 0) throw std::invalid_argument("pointwise algebra needs dim >= 1");
    return {MulRule::Pointwise, n};
  }

  /// Resolves "real-line", "strict-upper-4x4" or "pointwise-<n>".
  static std::optional<AlgebraDescriptor> from_name(std::string_view name) {
    if (name == "real-line") return real_line();
    if (name == "strict-upper-4x4") return strict_upper_4x4();
    constexpr std::string_view prefix = "pointwise-";
    if (name.substr(0, prefix.size()) == prefix && name.size() > prefix.size()) {
      std::size_t n = 0;
      for (char c : name.substr(prefix.size())) {
        if (c < '0' || c > '9') return std::nullopt;
        n = n * 10 + static_cast<std::size_t>(c - '0');
        if (n > 1'000'000) return std::nullopt;
      }
      if (n == 0) return std::nullopt;
      return pointwise(n);
    }
    return std::nullopt;
  }

  std::string id() const {
    switch (rule_) {
      case MulRule::RealLine: return "real-line";
      case MulRule::StrictUpper4x4: return "strict-upper-4x4";
      case MulRule::Pointwise: return "pointwise-" + std::to_string(dim_);
    }
    return {};
  }

  std::size_t dim() const noexcept { return dim_; }
  MulRule mul_rule() const noexcept { return rule_; }
  NormRule norm_rule() const noexcept {
    switch (rule_) {
      case MulRule::RealLine: return NormRule::Absolute;
      case MulRule::StrictUpper4x4: return NormRule::EntrywiseL1;
      case MulRule::Pointwise: return NormRule::MaxPointwise;
    }
    return NormRule::Absolute;
  }
  bool commutative() const noexcept { return rule_ != MulRule::StrictUpper4x4; }

  friend bool operator==(const AlgebraDescriptor&, const AlgebraDescriptor&) = default;

 private:
  AlgebraDescriptor(MulRule rule, std::size_t dim) : rule_(rule), dim_(dim) {}

  MulRule rule_;
  std::size_t dim_;
};

/// A coefficient vector tagged with the algebra it lives in.
class Element {
 public:
  Element(AlgebraDescriptor algebra, std::vector<double> coeffs)
      : algebra_(std::move(algebra)), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != algebra_.dim()) {
      throw std::invalid_argument("element of " + algebra_.id() + " needs " +
                                  std::to_string(algebra_.dim()) + " coefficients, got " +
                                  std::to_string(coeffs_.size()));
    }
    for (double c : coeffs_) {
      if (!std::isfinite(c)) throw std::invalid_argument("element coefficient is not finite");
    }
  }

  static Element zero(const AlgebraDescriptor& algebra) {
    return Element(algebra, std::vector<double>(algebra.dim(), 0.0));
  }

  const AlgebraDescriptor& algebra() const noexcept { return algebra_; }
  std::span<const double> coeffs() const noexcept { return coeffs_; }
  double operator[](std::size_t i) const { return coeffs_.at(i); }
  std::size_t dim() const noexcept { return coeffs_.size(); }

  bool is_zero() const noexcept {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](double c) { return c == 0.0; });
  }
  double max_abs_coeff() const noexcept {
    double m = 0.0;
    for (double c : coeffs_) m = std::max(m, std::abs(c));
    return m;
  }

  friend bool operator==(const Element&, const Element&) = default;

 private:
  // Unchecked construction for results of closed operations, which may
  // overflow to inf; callers that care guard on max_abs_coeff().
  struct Raw {};
  Element(Raw, AlgebraDescriptor algebra, std::vector<double> coeffs)
      : algebra_(std::move(algebra)), coeffs_(std::move(coeffs)) {}

  friend Element add(const Element&, const Element&);
  friend Element sub(const Element&, const Element&);
  friend Element scale(double, const Element&);
  friend Element mul(const Element&, const Element&);

  AlgebraDescriptor algebra_;
  std::vector<double> coeffs_;
};

namespace detail {

inline void require_same(const Element& a, const Element& b, const char* op) {
  if (!(a.algebra() == b.algebra())) {
    throw AlgebraMismatch(std::string(op) + ": " + a.algebra().id() + " vs " + b.algebra().id());
  }
}

// Index of entry (row, col), 0-based with row < col, in the 6-vector.
constexpr std::array<std::pair<int, int>, 6> kUpperPositions{
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

inline std::array<std::array<double, 4>, 4> to_matrix(std::span<const double> c) {
  std::array<std::array<double, 4>, 4> m{};
  for (std::size_t k = 0; k < kUpperPositions.size(); ++k) {
    m[kUpperPositions[k].first][kUpperPositions[k].second] = c[k];
  }
  return m;
}

}  // namespace detail

inline Element add(const Element& a, const Element& b) {
  detail::require_same(a, b, "add");
  std::vector<double> out(a.dim());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.coeffs()[i] + b.coeffs()[i];
  return Element(Element::Raw{}, a.algebra(), std::move(out));
}

inline Element sub(const Element& a, const Element& b) {
  detail::require_same(a, b, "sub");
  std::vector<double> out(a.dim());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.coeffs()[i] - b.coeffs()[i];
  return Element(Element::Raw{}, a.algebra(), std::move(out));
}

inline Element scale(double c, const Element& a) {
  if (!std::isfinite(c)) throw std::invalid_argument("scale: factor is not finite");
  std::vector<double> out(a.dim());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = c * a.coeffs()[i];
  return Element(Element::Raw{}, a.algebra(), std::move(out));
}

inline Element mul(const Element& a, const Element& b) {
  detail::require_same(a, b, "mul");
  const auto& alg = a.algebra();
  std::vector<double> out(alg.dim(), 0.0);
  switch (alg.mul_rule()) {
    case MulRule::RealLine:
    case MulRule::Pointwise:
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.coeffs()[i] * b.coeffs()[i];
      break;
    case MulRule::StrictUpper4x4: {
      const auto ma = detail::to_matrix(a.coeffs());
      const auto mb = detail::to_matrix(b.coeffs());
      for (std::size_t k = 0; k < detail::kUpperPositions.size(); ++k) {
        const auto [r, c] = detail::kUpperPositions[k];
        double s = 0.0;
        for (int j = r + 1; j < c; ++j) s += ma[r][j] * mb[j][c];
        out[k] = s;
      }
      break;
    }
  }
  return Element(Element::Raw{}, alg, std::move(out));
}

inline double norm(const Element& a) {
  double s = 0.0;
  switch (a.algebra().norm_rule()) {
    case NormRule::Absolute:
    case NormRule::EntrywiseL1:
      for (double c : a.coeffs()) s += std::abs(c);
      return s;
    case NormRule::MaxPointwise:
      return a.max_abs_coeff();
  }
  return s;
}

inline Element operator+(const Element& a, const Element& b) { return add(a, b); }
inline Element operator-(const Element& a, const Element& b) { return sub(a, b); }
inline Element operator*(const Element& a, const Element& b) { return mul(a, b); }
inline Element operator*(double c, const Element& a) { return scale(c, a); }

/// Distance ‖a − b‖.
inline double distance(const Element& a, const Element& b) { return norm(sub(a, b)); }

/// The constant element a of the worked example: entries (1,3)=1, (1,4)=2, (2,4)=1.
inline Element paper_constant_a() {
  return Element(AlgebraDescriptor::strict_upper_4x4(), {0.0, 1.0, 2.0, 0.0, 1.0, 0.0});
}

inline Element real(double v) { return Element(AlgebraDescriptor::real_line(), {v}); }

/// Seeded source of probe coordinates. Copyable; copies continue the same stream.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [lo, hi], built from the top 53 bits of the engine output.
  double uniform(double lo, double hi) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

  Element element(const AlgebraDescriptor& algebra, double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius)) {
      throw std::invalid_argument("sample radius must be a positive finite real");
    }
    std::vector<double> c(algebra.dim());
    for (double& v : c) v = uniform(-radius, radius);
    return Element(algebra, std::move(c));
  }

 private:
  std::mt19937_64 engine_;
};

inline Element sample(const AlgebraDescriptor& algebra, double radius, std::uint64_t seed) {
  return Sampler(seed).element(algebra, radius);
}

struct ProbeSpec {
  double radius = 1.0;
  std::uint64_t seed = 42;
  std::size_t count = 100;

  friend bool operator==(const ProbeSpec&, const ProbeSpec&) = default;
};

struct ProbePair {
  Element x;
  Element y;
};

/// Deterministic probe pairs; the first k pairs do not depend on count.
inline std::vector<ProbePair> probe_pairs(const AlgebraDescriptor& algebra, const ProbeSpec& spec) {
  Sampler s(spec.seed);
  std::vector<ProbePair> out;
  out.reserve(spec.count);
  for (std::size_t i = 0; i < spec.count; ++i) {
    Element x = s.element(algebra, spec.radius);
    Element y = s.element(algebra, spec.radius);
    out.push_back({std::move(x), std::move(y)});
  }
  return out;
}

}  // namespace hyers

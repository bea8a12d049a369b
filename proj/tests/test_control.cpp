#include <gtest/gtest.h>

#include <cmath>

#include "hyers/control.hpp"
#include "oracles.hpp"

using namespace hyers;

namespace {

const AlgebraDescriptor kUpper = AlgebraDescriptor::strict_upper_4x4();
const AlgebraDescriptor kReal = AlgebraDescriptor::real_line();

Element zero_upper() { return Element::zero(kUpper); }

// Enough terms that the neglected tail is below 1e-14 relative for every
// degree used here (ratio at most 2^-0.1).
constexpr int kOracleTerms = 600;

}  // namespace

TEST(Control, EvalFamilies) {
  const Element x = sample(kUpper, 1.0, 1), y = sample(kUpper, 1.0, 2);
  EXPECT_EQ(ControlFunction::constant(56)(x, y), 56.0);
  for (double p : {-1.0, -0.5, 0.0}) {
    EXPECT_EQ(ControlFunction::sum_powers(3.0, p)(zero_upper(), zero_upper()), 0.0) << p;
  }
  EXPECT_EQ(ControlFunction::product_powers(2.0, 1.0, 1.0)(x, zero_upper()), 0.0);
  EXPECT_EQ(ControlFunction::product_powers(2.0, 1.0, -1.0)(x, zero_upper()), 0.0);
  EXPECT_DOUBLE_EQ(ControlFunction::sum_powers(2.0, 2.0)(real(3.0), real(-1.0)), 2.0 * (9.0 + 1.0));
  EXPECT_DOUBLE_EQ(ControlFunction::product_powers(2.0, 1.0, 2.0)(real(3.0), real(-2.0)), 2.0 * 3.0 * 4.0);
  EXPECT_DOUBLE_EQ(ControlFunction::power_of_y(5.0, -1.0)(real(3.0), real(-2.0)), 2.5);
  EXPECT_EQ(ControlFunction::power_of_y(5.0, 0.0)(real(3.0), real(0.0)), 0.0);
  EXPECT_EQ(ControlFunction::power_of_y(5.0, 0.0)(real(3.0), real(0.1)), 5.0);
}

TEST(Control, RejectsNegativeTheta) {
  EXPECT_THROW(ControlFunction::constant(-1.0), std::invalid_argument);
  EXPECT_THROW(ControlFunction::sum_powers(NAN, 1.0), std::invalid_argument);
}

TEST(Control, PsiForwardConstantIs64) {
  const Element x = sample(kUpper, 1.0, 3), y = sample(kUpper, 1.0, 4);
  const SeriesValue v = psi_forward(ControlFunction::constant(56), x, y);
  EXPECT_EQ(v.value, 64.0);
  EXPECT_TRUE(v.closed_form);
  EXPECT_EQ(v.terms_used, 0);
  EXPECT_EQ(v.tail_bound, 0.0);
}

TEST(Control, PsiForwardSumPowersClosedFormAgainstOracle) {
  const double theta = 2.5;
  for (double p : {-1.0, 0.0, 1.0, 2.0, 2.9}) {
    for (double nx : {0.3, 1.0, 4.0}) {
      const ControlFunction phi = ControlFunction::sum_powers(theta, p);
      const double got = psi_forward(phi, real(nx), real(0.0)).value;
      const double formula = theta * std::pow(nx, p) / (1.0 - std::exp2(p - 3.0));
      const double brute = oracle::forward_partial_sum(
          [&](double s, double t) { return theta * (pow0(s, p) + pow0(t, p)); }, nx, 0.0, kOracleTerms);
      EXPECT_NEAR(got, formula, 1e-12 * formula) << p;
      EXPECT_NEAR(got, brute, 1e-9 * brute) << p;
    }
  }
}

// A 200-term partial sum falls short of the closed form by the factor
// r^200 with r = 2^(p−3); for p = 2.9 that is 2^-20.
TEST(Control, TwoHundredTermTruncationErrorForSlowRatio) {
  const double p = 2.9;
  const ControlFunction phi = ControlFunction::sum_powers(1.0, p);
  const double closed = psi_forward(phi, real(1.0), real(0.0)).value;
  const double brute200 =
      oracle::forward_partial_sum([&](double s, double t) { return pow0(s, p) + pow0(t, p); }, 1.0, 0.0, 200);
  EXPECT_NEAR((closed - brute200) / closed, std::exp2(-20.0), 1e-12);
}

TEST(Control, PsiForwardDivergence) {
  const Element x = sample(kUpper, 1.0, 5);
  try {
    psi_forward(ControlFunction::sum_powers(1.0, 3.0), x, zero_upper());
    FAIL() << "expected divergence";
  } catch (const DivergentSeries& e) {
    EXPECT_NE(std::string(e.what()).find(">= 3"), std::string::npos);
  }
  EXPECT_THROW(psi_forward(ControlFunction::product_powers(1.0, 2.0, 1.5), x, x), DivergentSeries);
  // Every term vanishes at the origin.
  EXPECT_EQ(psi_forward(ControlFunction::sum_powers(1.0, 3.0), zero_upper(), zero_upper()).value, 0.0);
}

TEST(Control, PsiBackward) {
  const double eps = 1e-3;
  for (double x : {-2.0, -0.5, 0.7, 1.9}) {
    const SeriesValue v = psi_backward(ControlFunction::sum_powers(28 * eps, 4.0), real(x), real(0.0));
    EXPECT_NEAR(v.value, 28 * eps * std::pow(x, 4), 1e-15);
    const double brute = oracle::backward_partial_sum(
        [&](double s, double t) { return 28 * eps * (pow0(s, 4) + pow0(t, 4)); }, std::abs(x), 0.0, 200);
    EXPECT_NEAR(v.value, brute, 1e-12 * brute);
  }
  EXPECT_THROW(psi_backward(ControlFunction::constant(1.0), real(1.0), real(0.0)), DivergentSeries);
  EXPECT_THROW(psi_backward(ControlFunction::constant(1.0), real(0.0), real(0.0)), DivergentSeries);
  for (const auto& phi : {ControlFunction::sum_powers(1.0, 5.0), ControlFunction::product_powers(1.0, 2.0, 2.0),
                          ControlFunction::power_of_y(1.0, 4.0)}) {
    EXPECT_EQ(psi_backward(phi, real(0.0), real(0.0)).value, 0.0);
  }
}

TEST(Control, SeriesConvergesByDegree) {
  EXPECT_TRUE(series_converges(ControlFunction::constant(1), Direction::Forward));
  EXPECT_FALSE(series_converges(ControlFunction::constant(1), Direction::Backward));
  EXPECT_TRUE(series_converges(ControlFunction::product_powers(1, 1, 1), Direction::Forward));
  EXPECT_FALSE(series_converges(ControlFunction::product_powers(1, 2, 1), Direction::Forward));
  EXPECT_FALSE(series_converges(ControlFunction::product_powers(1, 2, 1), Direction::Backward));
  EXPECT_TRUE(series_converges(ControlFunction::power_of_y(1, 3.5), Direction::Backward));
}

TEST(ControlProperties, RecursionIdentities) {
  Sampler s(31);
  for (int i = 0; i < 600; ++i) {
    const Element x = s.element(kUpper, 2.0), y = s.element(kUpper, 2.0);
    const Element x2 = scale(2.0, x), y2 = scale(2.0, y);
    const Element xh = scale(0.5, x), yh = scale(0.5, y);
    const double theta = s.uniform(0.0, 5.0);
    const double pf = s.uniform(-1.0, 2.9);
    const double pb = s.uniform(3.1, 6.0);
    for (const auto& phi : {ControlFunction::constant(theta), ControlFunction::sum_powers(theta, pf),
                            ControlFunction::product_powers(theta, 0.5, pf / 2), ControlFunction::power_of_y(theta, pf)}) {
      const double lhs = psi_forward(phi, x, y).value;
      const double rhs = phi(x, y) + psi_forward(phi, x2, y2).value / 8.0;
      EXPECT_NEAR(lhs, rhs, 1e-9 * (1.0 + lhs));
    }
    for (const auto& phi : {ControlFunction::sum_powers(theta, pb), ControlFunction::product_powers(theta, 1.0, pb - 1.0),
                            ControlFunction::power_of_y(theta, pb)}) {
      const double lhs = psi_backward(phi, x, y).value;
      const double rhs = 8.0 * (phi(xh, yh) + psi_backward(phi, xh, yh).value);
      EXPECT_NEAR(lhs, rhs, 1e-9 * (1.0 + lhs));
    }
  }
}

TEST(ControlProperties, MonotoneInTheta) {
  Sampler s(32);
  for (int i = 0; i < 500; ++i) {
    const Element x = s.element(kUpper, 2.0), y = s.element(kUpper, 2.0);
    const double t1 = s.uniform(0.0, 3.0), t2 = t1 + s.uniform(0.0, 3.0);
    const double p = s.uniform(-1.0, 2.9);
    EXPECT_LE(psi_forward(ControlFunction::sum_powers(t1, p), x, y).value,
              psi_forward(ControlFunction::sum_powers(t2, p), x, y).value);
    EXPECT_LE(psi_backward(ControlFunction::power_of_y(t1, 4.0), x, y).value,
              psi_backward(ControlFunction::power_of_y(t2, 4.0), x, y).value);
  }
}

namespace {

// φ(s, t) = (s + t)^2 sampled on a dyadic grid; exact values at the breakpoints
// satisfy φ(2u) = 4φ(u), so ρ = 4 certifies the forward direction.
ControlFunction quadratic_table(bool extrapolate) {
  control::Tabulated t;
  for (int k = -20; k <= 20; ++k) t.x_breaks.push_back(std::ldexp(1.0, k));
  t.x_breaks.insert(t.x_breaks.begin(), 0.0);
  t.y_breaks = {0.0};
  for (double bx : t.x_breaks) t.values.push_back(bx * bx);
  t.rho = 4.0;
  t.extrapolate = extrapolate;
  return ControlFunction::tabulated(t);
}

}  // namespace

TEST(Control, TabulatedLookupAndExtrapolation) {
  const ControlFunction phi = quadratic_table(false);
  EXPECT_EQ(phi.at_norms(1.0, 0.0), 1.0);
  EXPECT_EQ(phi.at_norms(0.75, 0.0), 1.0);  // ceiling cell
  EXPECT_EQ(phi.at_norms(0.0, 0.0), 0.0);
  EXPECT_THROW(phi.at_norms(std::ldexp(1.0, 21), 0.0), OutOfTable);
  EXPECT_THROW(phi.at_norms(1.0, 0.5), OutOfTable);
  const ControlFunction ext = quadratic_table(true);
  EXPECT_EQ(ext.at_norms(std::ldexp(1.0, 22), 0.0), std::ldexp(1.0, 40) * 16.0);
}

TEST(Control, TabulatedForwardSeriesHasCertifiedTail) {
  const ControlFunction phi = quadratic_table(true);
  const double tol = 1e-10;
  for (int k = -5; k <= 5; ++k) {
    const double s = std::ldexp(1.0, k);
    const SeriesValue v = psi_forward(phi, real(s), real(0.0), tol);
    // On breakpoints the table is exact: Σ 4^i s² / 8^i = 2 s².
    EXPECT_FALSE(v.closed_form);
    EXPECT_GT(v.terms_used, 0);
    EXPECT_LE(v.tail_bound, tol);
    EXPECT_NEAR(v.value, 2.0 * s * s, tol + 1e-12 * s * s);
  }
}

TEST(Control, TabulatedDivergentRatio) {
  control::Tabulated t{{0.0, 1.0}, {0.0, 1.0}, {0, 1, 1, 1}, 8.0, true};
  EXPECT_THROW(psi_forward(ControlFunction::tabulated(t), real(0.5), real(0.5)), DivergentSeries);
  t.rho = 0.2;
  EXPECT_THROW(psi_backward(ControlFunction::tabulated(t), real(0.5), real(0.5)), DivergentSeries);
  EXPECT_THROW(ControlFunction::tabulated({{1.0}, {1.0}, {1.0, 2.0}, 1.0, false}), std::invalid_argument);
}

TEST(Control, Phi1VanishingPowerFamilies) {
  const Element x = sample(kUpper, 1.0, 40), y = sample(kUpper, 1.0, 41);
  const auto c_fwd = phi1_vanishing_check(ControlFunction::constant(4), Direction::Forward, x, y);
  EXPECT_TRUE(c_fwd.holds);
  EXPECT_DOUBLE_EQ(c_fwd.ratio, 1.0 / 64.0);
  EXPECT_FALSE(phi1_vanishing_check(ControlFunction::constant(4), Direction::Backward, x, y).holds);
  for (double p : {-1.0, 0.0, 2.0, 5.9}) {
    const auto v = phi1_vanishing_check(ControlFunction::power_of_y(1.0, p), Direction::Forward, x, y);
    EXPECT_TRUE(v.holds) << p;
    EXPECT_DOUBLE_EQ(v.ratio, std::exp2(p - 6.0));
  }
  EXPECT_FALSE(phi1_vanishing_check(ControlFunction::sum_powers(1.0, 6.0), Direction::Forward, x, y).holds);
  EXPECT_TRUE(phi1_vanishing_check(ControlFunction::sum_powers(1.0, 7.0), Direction::Backward, x, y).holds);
  EXPECT_FALSE(phi1_vanishing_check(ControlFunction::sum_powers(1.0, 6.0), Direction::Backward, x, y).holds);
  // Zero everywhere on the ray.
  EXPECT_TRUE(phi1_vanishing_check(ControlFunction::constant(0.0), Direction::Backward, x, y).holds);
}

TEST(Control, Phi1VanishingTabulated) {
  const Element x = real(1.0), y = real(0.0);
  EXPECT_TRUE(phi1_vanishing_check(quadratic_table(true), Direction::Forward, x, y).holds);
  const auto inconclusive = phi1_vanishing_check(quadratic_table(false), Direction::Forward, x, y);
  EXPECT_FALSE(inconclusive.holds);
  EXPECT_EQ(inconclusive.witness, "inconclusive");
}

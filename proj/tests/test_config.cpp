#include <gtest/gtest.h>

#include "hyers/config.hpp"
#include "hyers/verify.hpp"

using namespace hyers;

namespace {

const char* kExample = R"(# worked example
algebra = strict-upper-4x4
map = x^3 + a
const.a = [0, 1, 2, 0, 1, 0]
phi1 = constant(4)
phi2 = constant(56)
method = forward
probes = 100
radius = 1
seed = 20080101
)";

ConfigError parse_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e;
  }
  ADD_FAILURE() << "no error for:\n" << text;
  return ConfigError(0, "", "");
}

}  // namespace

TEST(MapExpression, Parse) {
  const MapExpression e = parse_map_expression("x^3 + a");
  ASSERT_EQ(e.terms.size(), 2u);
  EXPECT_EQ(e.terms[0].power, 3);
  EXPECT_FALSE(e.terms[0].coef);
  EXPECT_EQ(e.terms[1].ident, "a");

  const MapExpression g = parse_map_expression("2.5*x + -1e-3*x^4 + 0.5*k2");
  ASSERT_EQ(g.terms.size(), 3u);
  EXPECT_EQ(g.terms[0].power, 1);
  EXPECT_DOUBLE_EQ(g.terms[0].weight(), 2.5);
  EXPECT_EQ(g.terms[1].power, 4);
  EXPECT_DOUBLE_EQ(g.terms[1].weight(), -1e-3);
  EXPECT_EQ(g.terms[2].ident, "k2");
  EXPECT_EQ(g.max_power(), 4);
}

TEST(MapExpression, RoundTrip) {
  for (const char* s : {"x^3", "x^3 + a", "0.001*x^4 + x^3", "2*x + 3*x^2 + -0.5*x^3 + b", "0.1*x"}) {
    const MapExpression e = parse_map_expression(s);
    const std::string printed = to_string(e);
    EXPECT_EQ(parse_map_expression(printed), e) << s;
    EXPECT_EQ(to_string(parse_map_expression(printed)), printed);
  }
}

TEST(MapExpression, ErrorsCarryColumn) {
  auto column_of = [](const char* s) -> std::size_t {
    try {
      parse_map_expression(s);
    } catch (const ExpressionError& e) {
      return e.column();
    }
    return 0;
  };
  EXPECT_EQ(column_of(""), 1u);
  EXPECT_EQ(column_of("x^5"), 3u);
  EXPECT_EQ(column_of("x^3 +"), 6u);
  EXPECT_EQ(column_of("x^3 ? a"), 5u);
  EXPECT_EQ(column_of("2 x"), 3u);
  EXPECT_EQ(column_of("x^23"), 4u);
}

TEST(Config, WorkedExample) {
  const RunConfig cfg = parse_config(kExample);
  EXPECT_EQ(cfg.algebra, AlgebraDescriptor::strict_upper_4x4());
  EXPECT_EQ(cfg.phi1, ControlFunction::constant(4));
  EXPECT_EQ(cfg.phi2, ControlFunction::constant(56));
  EXPECT_EQ(cfg.method, Direction::Forward);
  EXPECT_EQ(cfg.probes, kPaperExampleProbes);
  EXPECT_EQ(cfg.settings, IterationSettings{});
  const MapSpec f = to_map_spec(cfg);
  const Element x = sample(cfg.algebra, 1.0, 3);
  EXPECT_EQ(f(x), MapSpec::paper_example()(x));
}

TEST(Config, PureCubeWithoutConstants) {
  const RunConfig cfg = parse_config("algebra = real-line\nmap = x^3\nphi2 = power_of_y(1, 2)\n");
  EXPECT_TRUE(cfg.constants.empty());
  EXPECT_EQ(cfg.phi1, ControlFunction::constant(0));
  EXPECT_DOUBLE_EQ(to_map_spec(cfg)(real(2.0))[0], 8.0);
}

TEST(Config, SerializeRoundTrip) {
  const std::vector<std::string> texts = {
      kExample,
      "algebra = real-line\nmap = x^3 + 0.001*x^4\nphi2 = sum_powers(0.028, 4)\nmethod = backward\n"
      "radius = 2\ntol = 1e-12\nn_max = 60\nguard = 1e50\ncsv = out.csv\nreport = r.txt\ntrace_csv = t.csv\n",
      "algebra = pointwise-3\nmap = 0.3*x + k\nconst.k = [1, -2.5, 0.125]\nphi1 = product_powers(1, 1, 2)\n"
      "phi2 = power_of_y(0.5, -1)\nseed = 18446744073709551615\n",
  };
  for (const auto& t : texts) {
    const RunConfig cfg = parse_config(t);
    const std::string once = serialize_config(cfg);
    const RunConfig back = parse_config(once);
    EXPECT_EQ(back, cfg) << once;
    EXPECT_EQ(serialize_config(back), once);
  }
}

TEST(Config, Errors) {
  {
    const auto e = parse_error("algebra = upper-3x3\nmap = x^3\nphi2 = constant(1)\n");
    EXPECT_EQ(e.line(), 1u);
    EXPECT_EQ(e.field(), "algebra");
  }
  {
    const auto e = parse_error("algebra = real-line\nmap = x^3 + b\nphi2 = constant(1)\n");
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("undefined constant 'b'"), std::string::npos);
  }
  {
    const auto e = parse_error("algebra = real-line\n\nmap = x^3 +* a\nphi2 = constant(1)\n");
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.field(), "map");
    EXPECT_NE(std::string(e.what()).find("column 6"), std::string::npos) << e.what();
  }
  {
    const auto e = parse_error("algebra = strict-upper-4x4\nmap = x^4\nphi2 = constant(1)\n");
    EXPECT_NE(std::string(e.what()).find("x^4 requires real-line"), std::string::npos);
  }
  {
    const auto e = parse_error("algebra = real-line\nalgebra = real-line\n");
    EXPECT_EQ(e.line(), 2u);
  }
  {
    const auto e = parse_error("algebra = real-line\ncolour = blue\n");
    EXPECT_EQ(e.field(), "colour");
  }
  {
    const auto e = parse_error("algebra = pointwise-2\nmap = x + k\nconst.k = [1, 2, 3]\nphi2 = constant(1)\n");
    EXPECT_EQ(e.line(), 3u);
  }
  {
    const auto e = parse_error("algebra = real-line\nmap = x^3\n");
    EXPECT_EQ(e.field(), "phi2");
  }
  {
    const auto e = parse_error("algebra = real-line\nmap = x^3\nphi2 = sum_powers(1)\n");
    EXPECT_EQ(e.field(), "phi2");
  }
  {
    const auto e = parse_error("algebra = real-line\nmap = x^3\nphi2 = constant(1)\nmethod = sideways\n");
    EXPECT_EQ(e.field(), "method");
  }
  {
    const auto e = parse_error("algebra = real-line\nmap = x^3\nphi2 = constant(1)\ntol = -1\n");
    EXPECT_EQ(e.field(), "tol");
  }
  {
    const auto e = parse_error("algebra = real-line\nmap = x^3\nphi2 = constant(1)\nprobes = 1.5\n");
    EXPECT_EQ(e.field(), "probes");
  }
}

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include <gtest/gtest.h>

#include "fairnoma/special_functions.hpp"
#include "oracles.hpp"

namespace fairnoma {
namespace {

// Reference values from 30-digit evaluation of the defining power series.
const std::vector<std::pair<double, double>> kE1Table = {
    {1e-8, 17.843465089050832587},    {1e-3, 6.331539364136149332},
    {0.3, 0.90567665167584671243},    {0.999, 0.21975218202294454081},
    {1.0, 0.21938393439552027368},    {1.001, 0.21901642252746885568},
    {2.0, 0.048900510708061119567},   {3.0, 0.013048381094197037413},
    {10.0, 4.1569689296853242774e-6}, {50.0, 3.7832640295504590187e-24},
    {200.0, 6.8852261063076355977e-90}, {700.0, 1.4065187662340329228e-307},
};

TEST(ExpIntegralE1, MatchesHighPrecisionTable) {
  for (const auto& [x, expected] : kE1Table) {
    EXPECT_NEAR(exp_integral_e1(x) / expected, 1.0, 1e-12) << "x = " << x;
  }
}

TEST(ExpIntegralE1, LargeArgumentAsymptote) {
  const double x = 500.0;
  EXPECT_NEAR(x * std::exp(x) * exp_integral_e1(x), 1.0, 1e-2);
}

TEST(ExpIntegralE1, UnderflowReturnsZero) {
  EXPECT_EQ(exp_integral_e1(800.0), 0.0);
  EXPECT_EQ(exp_integral_e1(1e10), 0.0);
}

TEST(ExpIntegralE1, DomainErrors) {
  EXPECT_THROW(exp_integral_e1(0.0), std::domain_error);
  EXPECT_THROW(exp_integral_e1(-1.0), std::domain_error);
  EXPECT_THROW(exp_integral_e1(std::numeric_limits<double>::quiet_NaN()), std::domain_error);
  EXPECT_THROW(exp_integral_e1(std::numeric_limits<double>::infinity()), std::domain_error);
  EXPECT_THROW(exp_scaled_e1(0.0), std::domain_error);
  EXPECT_THROW(exp_scaled_e1(-3.0), std::domain_error);
}

TEST(ExpIntegralE1, IterationCapIsReportedNotTruncated) {
  const PrecisionBudget tight{1e-15, 1};
  EXPECT_THROW(exp_integral_e1(0.5, tight), ConvergenceError);
  EXPECT_THROW(exp_integral_e1(1.5, tight), ConvergenceError);
  EXPECT_THROW((PrecisionBudget{1e-3, 10}.validate()), std::invalid_argument);
  EXPECT_THROW((PrecisionBudget{1e-12, 0}.validate()), std::invalid_argument);
}

TEST(ExpScaledE1, ReferenceValues) {
  EXPECT_NEAR(exp_scaled_e1(1.0) / 0.59634736232319407434, 1.0, 1e-12);
  EXPECT_NEAR(exp_scaled_e1(1000.0) / 0.000999001994023880715, 1.0, 1e-12);
}

TEST(ExpScaledE1, ConsistentWithUnscaled) {
  for (double x = 0.1; x <= 10.0; x += 0.05) {
    EXPECT_NEAR(exp_scaled_e1(x) / (std::exp(x) * exp_integral_e1(x)), 1.0, 1e-12) << x;
  }
}

TEST(ExpScaledE1, FiniteForHugeArguments) {
  for (double x : {1e3, 1e10, 1e100, 1e300}) {
    const double v = exp_scaled_e1(x);
    EXPECT_TRUE(std::isfinite(v));
    EXPECT_NEAR(v * x, 1.0, 1.0 / x + 1e-15);
  }
}

TEST(ExpIntegralE1Property, StrictlyDecreasingAndBracketed) {
  double previous = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 900; ++i) {
    const double x = std::pow(10.0, -6.0 + 9.0 * i / 900.0);
    const double e1 = exp_integral_e1(x);
    // E1 itself underflows past ~745; the scaled bracket below covers the rest.
    if (x < 700.0) EXPECT_LT(e1, previous) << x;
    previous = e1;
    // e^{-x} ln(1 + 2/x) / 2 < E1(x) < e^{-x} ln(1 + 1/x), compared in scaled form.
    const double scaled = exp_scaled_e1(x);
    EXPECT_GT(scaled, 0.5 * std::log1p(2.0 / x)) << x;
    EXPECT_LT(scaled, std::log1p(1.0 / x)) << x;
  }
}

TEST(ExpIntegralE1Property, AgreesWithIndependentQuadrature) {
  for (double x : {0.5, 1.0, 2.0, 5.0}) {
    EXPECT_NEAR(exp_integral_e1(x) / oracle::e1_by_quadrature(x), 1.0, 1e-10) << x;
  }
}

}  // namespace
}  // namespace fairnoma

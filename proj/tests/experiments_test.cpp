#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "fairnoma/experiments.hpp"

namespace fairnoma {
namespace {

std::vector<ResultRow> select(const std::vector<ResultRow>& rows, const std::string& quantity,
                              const std::string& method) {
  std::vector<ResultRow> out;
  for (const auto& r : rows) {
    if (r.quantity == quantity && r.method == method) out.push_back(r);
  }
  return out;
}

TEST(Writers, CsvHeaderQuotingAndLineEndings) {
  std::ostringstream os;
  write_csv(os, {{1.5, "a,b", "closed-form", 0.25, 0.0}, {2.0, "say \"hi\"", "quadrature", 1e-300, 3e-9}});
  EXPECT_EQ(os.str(),
            "sweep_value,quantity,method,value,error_bound\r\n"
            "1.5,\"a,b\",closed-form,0.25,0\r\n"
            "2,\"say \"\"hi\"\"\",quadrature,1e-300,3e-09\r\n");
}

TEST(Writers, NumbersRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, 2.906514808414805, 1e-17, 123456789.0}) {
    EXPECT_EQ(std::stod(format_number(v)), v);
  }
}

TEST(Writers, JsonFieldNamesMatchCsvHeader) {
  std::ostringstream os;
  write_json(os, {{0.0, "c1_oma", "closed-form", 1.0, 0.0}});
  const auto j = nlohmann::json::parse(os.str());
  ASSERT_TRUE(j.is_array());
  for (const char* key : {"sweep_value", "quantity", "method", "value", "error_bound"}) {
    EXPECT_TRUE(j[0].contains(key)) << key;
  }
}

TEST(SweepSnr, MonotoneSumAndOrderedRows) {
  SweepSpec spec;
  const auto rows = sweep_snr(spec);
  const auto sum = select(rows, "sum_oma", "closed-form");
  ASSERT_EQ(sum.size(), 41u);
  for (std::size_t i = 1; i < sum.size(); ++i) EXPECT_GT(sum[i].value, sum[i - 1].value);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_LE(rows[i - 1].sweep_value, rows[i].sweep_value);
  }
  for (const auto& r : rows) EXPECT_TRUE(std::isfinite(r.value) && std::isfinite(r.error_bound));
  EXPECT_EQ(select(rows, "c1_noma:at_inf", "quadrature").size(), 41u);
  EXPECT_EQ(select(rows, "c2_noma:at_sup", "quadrature").size(), 41u);
}

TEST(SweepSnr, LowSnrFavoursStrongUserGain) {
  SweepSpec spec;
  spec.start = 0.0;
  spec.stop = 1.0;
  spec.steps = 2;
  const auto rows = sweep_snr(spec);
  const double weak = select(rows, "c1_noma:at_inf", "quadrature")[0].value -
                      select(rows, "c1_oma", "closed-form")[0].value;
  const double strong = select(rows, "c2_noma:at_sup", "quadrature")[0].value -
                        select(rows, "c2_oma", "closed-form")[0].value;
  EXPECT_GT(strong, weak);
}

TEST(SweepSnr, MonteCarloRowsPerPolicy) {
  SweepSpec spec;
  spec.start = 10.0;
  spec.stop = 20.0;
  spec.steps = 2;
  spec.methods = {false, false, true};
  spec.samples = 20'000;
  const auto rows = sweep_snr(spec);
  EXPECT_EQ(select(rows, "sum_oma", "monte-carlo").size(), 2u);
  for (const char* q : {"gap:at_inf", "gap:midpoint", "gap:at_sup", "c1_noma:midpoint"}) {
    const auto r = select(rows, q, "monte-carlo");
    ASSERT_EQ(r.size(), 2u) << q;
    EXPECT_GT(r[0].error_bound, 0.0);
  }
}

TEST(SweepSnr, QuadratureFailureFallsBackToMonteCarlo) {
  SweepSpec spec;
  spec.start = 10.0;
  spec.stop = 11.0;
  spec.steps = 2;
  spec.samples = 5'000;
  spec.quadrature.max_intervals = 1;
  spec.quadrature.abs_tol = 1e-15;
  spec.quadrature.rel_tol = 1e-15;
  const auto rows = sweep_snr(spec);
  EXPECT_TRUE(select(rows, "c1_noma:at_inf", "quadrature").empty());
  EXPECT_EQ(select(rows, "c1_noma:at_inf", "monte-carlo").size(), 2u);
  EXPECT_EQ(select(rows, "c2_noma:at_sup", "monte-carlo").size(), 2u);
}

TEST(SweepSpecValidation, RejectsBadGrids) {
  SweepSpec s;
  s.start = 5.0;
  s.stop = 5.0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s.stop = 6.0;
  s.steps = 1;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  SweepSpec a;
  a.variable = SweepVariable::Alpha;
  a.start = 0.0;
  a.stop = 0.5;
  EXPECT_THROW(a.validate(), std::invalid_argument);
  a.start = 0.1;
  a.pair = ChannelPair(1.0, 2.0);
  a.methods.monte_carlo = true;
  EXPECT_THROW(a.validate(), std::invalid_argument);
}

TEST(SweepAlpha, FixedPairIsExactAndMonotone) {
  SweepSpec spec;
  spec.variable = SweepVariable::Alpha;
  spec.start = 1e-9;
  spec.stop = 0.99;
  spec.steps = 50;
  spec.pair = ChannelPair(1.0, 4.0);
  spec.methods = {false, false, false};
  spec.snr_db = 10.0;
  const auto rows = sweep_alpha(spec);
  const auto sum = select(rows, "sum_noma", "closed-form");
  ASSERT_EQ(sum.size(), 50u);
  for (std::size_t i = 1; i < sum.size(); ++i) EXPECT_GT(sum[i].value, sum[i - 1].value);
  EXPECT_NEAR(select(rows, "a_inf_marker", "closed-form")[0].value, 0.13507810593582122, 1e-15);
  EXPECT_LT(select(rows, "c2_noma", "closed-form")[0].value, 1e-6);
}

TEST(SweepAlpha, MonteCarloExpectationIsMonotone) {
  SweepSpec spec;
  spec.variable = SweepVariable::Alpha;
  spec.start = 1e-9;
  spec.stop = 0.95;
  spec.steps = 20;
  spec.samples = 20'000;
  spec.methods = {false, false, true};
  const auto rows = sweep_alpha(spec);
  const auto sum = select(rows, "sum_noma", "monte-carlo");
  ASSERT_EQ(sum.size(), 20u);
  for (std::size_t i = 1; i < sum.size(); ++i) EXPECT_GE(sum[i].value, sum[i - 1].value);
  EXPECT_LT(select(rows, "c2_noma", "monte-carlo")[0].value, 1e-4);
  const auto inf = select(rows, "a_inf_marker", "monte-carlo");
  const auto sup = select(rows, "a_sup_marker", "monte-carlo");
  ASSERT_EQ(inf.size(), 1u);
  EXPECT_LT(inf[0].value, sup[0].value);
}

TEST(Validation, DefaultRunPasses) {
  const auto checks = run_validation(ValidationConfig{});
  EXPECT_EQ(checks.size(), 7u);
  for (const auto& c : checks) {
    EXPECT_TRUE(c.pass) << c.name << " delta " << c.delta << " tol " << c.tolerance;
    EXPECT_GT(c.std_error, 0.0) << c.name;
  }
  EXPECT_TRUE(all_passed(checks));
  std::ostringstream os;
  write_csv(os, checks);
  EXPECT_NE(os.str().find("std_error"), std::string::npos);
}

TEST(Validation, CorruptedExponentialIntegralIsDetected) {
  const auto faulty = [](double x) { return 1.01 * exp_scaled_e1(x); };
  const auto checks = run_validation(ValidationConfig{}, faulty);
  EXPECT_FALSE(all_passed(checks));
  EXPECT_FALSE(checks[0].pass);  // c1_oma closed form vs Monte Carlo
}

// ---------------------------------------------------------------------------
// The installed CLI binary.

struct Run {
  int status;
  std::string out;
};

Run run_cli(const std::string& args) {
  const std::string cmd = std::string(FAIRNOMA_CLI_PATH) + " " + args + " 2>&1";
  Run r{-1, {}};
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

TEST(Cli, RegionJsonAndAutoSort) {
  const auto a = run_cli("region --gains 1,4 --snr-db 10 --format json");
  ASSERT_EQ(a.status, 0) << a.out;
  const auto j = nlohmann::json::parse(a.out);
  EXPECT_NEAR(j["a_inf"].get<double>(), 0.135078, 1e-6);
  EXPECT_NEAR(j["a_sup"].get<double>(), 0.231662, 1e-6);
  EXPECT_EQ(run_cli("region --gains 4,1 --snr-db 10 --format json").out, a.out);
  const auto eq = nlohmann::json::parse(run_cli("region --gains 1,1 --snr-db 3 --format json").out);
  EXPECT_EQ(eq["a_inf"], eq["a_sup"]);
  EXPECT_EQ(run_cli("region --gains 1,4 --snr-db 10").status, 0);
}

TEST(Cli, UsageErrorsExitTwoNamingTheFlag) {
  auto r = run_cli("region --gains 1,-4 --snr-db 10");
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.out.find("--gains"), std::string::npos) << r.out;
  r = run_cli("region --gains 1 --snr-db 10");
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.out.find("--gains"), std::string::npos) << r.out;
  r = run_cli("capacity --gains 1,4 --snr-db 10 --alpha 1.5");
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.out.find("--alpha"), std::string::npos) << r.out;
  r = run_cli("sweep-snr --format xml");
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.out.find("--format"), std::string::npos) << r.out;
  r = run_cli("sweep-alpha --gains 1,2 --methods monte-carlo");
  EXPECT_EQ(r.status, 2);
  EXPECT_EQ(run_cli("bogus").status, 2);
}

TEST(Cli, CapacityReportsRegionMembership) {
  const auto r = run_cli("capacity --gains 1,4 --snr-db 10 --alpha 0.2 --format json");
  ASSERT_EQ(r.status, 0) << r.out;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["in_fair_region"].get<bool>());
  EXPECT_GT(j["sic_margin"].get<double>(), 0.0);
  EXPECT_GT(j["sum_noma"].get<double>(), j["sum_oma"].get<double>());
}

TEST(Cli, SweepOutputIsByteIdenticalAcrossRunsAndThreads) {
  const std::string args =
      "sweep-snr --start 0 --stop 20 --steps 3 --methods closed-form,quadrature,monte-carlo "
      "--samples 50000 --seed 9";
  const auto a = run_cli(args + " --threads 1");
  const auto b = run_cli(args + " --threads 4");
  const auto c = run_cli(args + " --threads 1");
  ASSERT_EQ(a.status, 0) << a.out;
  EXPECT_EQ(a.out.rfind("sweep_value,quantity,method,value,error_bound\r\n", 0), 0u);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, c.out);
}

TEST(Cli, ValidateExitsZero) {
  const auto r = run_cli("validate --samples 200000");
  EXPECT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("std_error"), std::string::npos);
}

}  // namespace
}  // namespace fairnoma

// fairnoma: command-line front end for the two-user fair NOMA library.
//
//   fairnoma region      --gains 1,4 --snr-db 10
//   fairnoma capacity    --gains 1,4 --snr-db 10 --alpha 0.2
//   fairnoma sweep-snr   --start 0 --stop 40 --steps 41 [--methods ...] [--policy ...]
//   fairnoma sweep-alpha --snr-db 30 --start 0.01 --stop 0.99 --steps 99
//   fairnoma validate    [--samples N] [--seed S]
//
// Exit codes: 0 success, 1 numerical failure, 2 usage error.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fairnoma/fairnoma.hpp"

namespace {

using namespace fairnoma;

constexpr int kExitNumerical = 1;
constexpr int kExitUsage = 2;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Options {
  double snr_db = 0.0;
  double beta = 1.0;
  std::vector<double> gains;
  double alpha = 0.0;
  std::vector<std::string> policies;
  std::vector<std::string> methods;
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 1;
  int steps = 0;
  double start = 0.0;
  double stop = 0.0;
  std::string format;
  std::string out;
  unsigned threads = 0;
};

std::vector<std::string> split_list(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const auto& item : items) {
    std::stringstream ss(item);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (!tok.empty()) out.push_back(tok);
    }
  }
  return out;
}

AllocationPolicy parse_policy(const std::string& name, const Options& o, bool have_alpha) {
  if (name == "at-inf") return AllocationPolicy::at_inf();
  if (name == "at-sup") return AllocationPolicy::at_sup();
  if (name == "midpoint") return AllocationPolicy::midpoint();
  if (name == "fixed") {
    if (!have_alpha) throw UsageError("--policy fixed requires --alpha");
    if (!(o.alpha > 0.0 && o.alpha < 1.0)) throw UsageError("--alpha must lie in (0, 1)");
    return AllocationPolicy::fixed(o.alpha);
  }
  throw UsageError("--policy: unknown policy '" + name + "'");
}

MethodSet parse_methods(const std::vector<std::string>& names) {
  MethodSet m{false, false, false};
  for (const auto& n : names) {
    if (n == "closed-form") {
      m.closed_form = true;
    } else if (n == "quadrature") {
      m.quadrature = true;
    } else if (n == "monte-carlo") {
      m.monte_carlo = true;
    } else {
      throw UsageError("--methods: unknown method '" + n + "'");
    }
  }
  return m;
}

ChannelPair parse_gains(const std::vector<double>& g) {
  if (g.size() != 2) throw UsageError("--gains expects exactly two values g1,g2");
  if (!(g[0] > 0.0 && g[1] > 0.0 && std::isfinite(g[0]) && std::isfinite(g[1]))) {
    throw UsageError("--gains values must be finite and > 0");
  }
  return ChannelPair(g[0], g[1]);
}

SystemParams parse_params(const Options& o) {
  if (!std::isfinite(o.snr_db)) throw UsageError("--snr-db must be finite");
  if (!(o.beta > 0.0 && std::isfinite(o.beta))) throw UsageError("--beta must be finite and > 0");
  return SystemParams::from_db(o.snr_db, o.beta);
}

void check_format(const std::string& f, bool allow_text) {
  if (f == "csv" || f == "json" || (allow_text && f == "text")) return;
  throw UsageError("--format: unsupported format '" + f + "'");
}

// Writes to --out when given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
      if (!*file_) throw UsageError("--out: cannot open '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void emit_rows(const Options& o, const std::vector<ResultRow>& rows) {
  Sink sink(o.out);
  if (o.format == "json") {
    write_json(sink.stream(), rows);
  } else {
    write_csv(sink.stream(), rows);
  }
}

void print_report_text(std::ostream& os, const char* label, const CapacityReport& r) {
  os << label << " (a = " << r.a_used << ")\n"
     << "  user      OMA           NOMA\n"
     << "  MU-1  " << std::setw(12) << r.c1_oma << "  " << std::setw(12) << r.c1_noma << '\n'
     << "  MU-2  " << std::setw(12) << r.c2_oma << "  " << std::setw(12) << r.c2_noma << '\n'
     << "  sum   " << std::setw(12) << r.sum_oma << "  " << std::setw(12) << r.sum_noma << '\n';
}

int cmd_region(const Options& o) {
  check_format(o.format, true);
  const auto params = parse_params(o);
  const auto summary = summarize_region(params, parse_gains(o.gains));
  Sink sink(o.out);
  auto& os = sink.stream();
  if (o.format == "json") {
    os << to_json(summary).dump(2) << '\n';
  } else if (o.format == "csv") {
    write_csv(os, region_rows(summary));
  } else {
    os << std::setprecision(9) << "gains   " << summary.pair.weak() << ", "
       << summary.pair.strong() << "\nsnr_db  " << summary.snr_db << "\na_inf   "
       << summary.region.a_inf << "\na_sup   " << summary.region.a_sup << "\n\n";
    print_report_text(os, "at a_inf", summary.at_inf);
    os << '\n';
    print_report_text(os, "at a_sup", summary.at_sup);
  }
  return 0;
}

int cmd_capacity(const Options& o) {
  check_format(o.format, true);
  const auto params = parse_params(o);
  const auto pair = parse_gains(o.gains);
  if (!(o.alpha > 0.0 && o.alpha < 1.0)) throw UsageError("--alpha must lie in (0, 1)");
  const PowerAllocation a(o.alpha);
  const auto report = capacity_report(params, pair, a);
  const auto region = fair_region(params, pair);
  const double margin = sic_margin(params, pair, a);
  Sink sink(o.out);
  auto& os = sink.stream();
  if (o.format == "json") {
    auto j = report_json(report);
    j["a_inf"] = region.a_inf;
    j["a_sup"] = region.a_sup;
    j["in_fair_region"] = region.contains(o.alpha);
    j["sic_margin"] = margin;
    os << j.dump(2) << '\n';
  } else if (o.format == "csv") {
    std::vector<ResultRow> rows;
    append_report(rows, o.alpha, report, "closed-form");
    rows.push_back({o.alpha, "sic_margin", "closed-form", margin, 0.0});
    write_csv(os, rows);
  } else {
    os << std::setprecision(9);
    print_report_text(os, "capacities", report);
    os << "fair region  [" << region.a_inf << ", " << region.a_sup << "]"
       << (region.contains(o.alpha) ? "  (a inside)\n" : "  (a outside)\n")
       << "sic margin   " << margin << '\n';
  }
  return 0;
}

SweepSpec base_spec(const Options& o, bool have_alpha) {
  SweepSpec spec;
  spec.start = o.start;
  spec.stop = o.stop;
  spec.steps = o.steps;
  spec.beta = o.beta;
  spec.samples = o.samples;
  spec.seed = o.seed;
  spec.mc.workers = o.threads;
  if (!o.policies.empty()) {
    spec.policies.clear();
    for (const auto& p : split_list(o.policies)) spec.policies.push_back(parse_policy(p, o, have_alpha));
  }
  return spec;
}

int cmd_sweep_snr(const Options& o, bool have_alpha) {
  check_format(o.format, false);
  auto spec = base_spec(o, have_alpha);
  spec.variable = SweepVariable::SnrDb;
  spec.methods = o.methods.empty() ? MethodSet{} : parse_methods(split_list(o.methods));
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  emit_rows(o, sweep_snr(spec));
  return 0;
}

int cmd_sweep_alpha(const Options& o, bool have_gains) {
  check_format(o.format, false);
  auto spec = base_spec(o, false);
  spec.variable = SweepVariable::Alpha;
  spec.snr_db = o.snr_db;
  if (have_gains) spec.pair = parse_gains(o.gains);
  spec.methods = MethodSet{false, false, !have_gains};
  if (!o.methods.empty()) {
    const auto m = parse_methods(split_list(o.methods));
    if (m.monte_carlo && have_gains) {
      throw UsageError("--gains and --methods monte-carlo are mutually exclusive");
    }
  }
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  emit_rows(o, sweep_alpha(spec));
  return 0;
}

int cmd_validate(const Options& o) {
  check_format(o.format, false);
  ValidationConfig cfg;
  cfg.snr_db = o.snr_db;
  cfg.beta = o.beta;
  cfg.samples = o.samples;
  cfg.seed = o.seed;
  cfg.mc.workers = o.threads;
  if (cfg.samples < 2) throw UsageError("--samples must be >= 2");
  const auto checks = run_validation(cfg);
  Sink sink(o.out);
  if (o.format == "json") {
    write_json(sink.stream(), checks);
  } else {
    write_csv(sink.stream(), checks);
  }
  return all_passed(checks) ? 0 : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-user fair NOMA power allocation: capacities, sweeps and validation"};
  app.require_subcommand(1);

  Options o;
  auto* region = app.add_subcommand("region", "Fair allocation region for one channel pair");
  auto* capacity = app.add_subcommand("capacity", "OMA/NOMA capacities at a given allocation");
  auto* sweep_snr_cmd = app.add_subcommand("sweep-snr", "Ergodic capacities against SNR");
  auto* sweep_alpha_cmd = app.add_subcommand("sweep-alpha", "Capacities against allocation a");
  auto* validate = app.add_subcommand("validate", "Cross-check analytic results with Monte Carlo");

  const auto add_common = [&](CLI::App* c) {
    c->add_option("--beta", o.beta, "Rayleigh scale E|h|^2")->capture_default_str();
    c->add_option("--format", o.format, "Output format: csv|json (text for region/capacity)");
    c->add_option("--out", o.out, "Output path (default stdout)");
  };
  const auto add_mc = [&](CLI::App* c) {
    c->add_option("--samples", o.samples, "Monte Carlo sample count");
    c->add_option("--seed", o.seed, "Monte Carlo seed");
    c->add_option("--threads", o.threads, "Worker threads (0: all cores); output is independent of it");
  };
  const auto add_grid = [&](CLI::App* c) {
    c->add_option("--start", o.start, "First grid value");
    c->add_option("--stop", o.stop, "Last grid value");
    c->add_option("--steps", o.steps, "Number of grid points");
  };

  for (auto* c : {region, capacity}) {
    add_common(c);
    c->add_option("--snr-db", o.snr_db, "Transmit SNR in dB")->required();
    c->add_option("--gains", o.gains, "Channel SNR gains g1,g2")->delimiter(',')->required();
  }
  capacity->add_option("--alpha", o.alpha, "Power fraction for the strong user")->required();

  for (auto* c : {sweep_snr_cmd, sweep_alpha_cmd, validate}) {
    add_common(c);
    add_mc(c);
  }
  for (auto* c : {sweep_snr_cmd, sweep_alpha_cmd}) {
    add_grid(c);
    c->add_option("--methods", o.methods, "closed-form,quadrature,monte-carlo")->delimiter(',');
  }
  auto* snr_alpha = sweep_snr_cmd->add_option("--alpha", o.alpha, "a for --policy fixed");
  sweep_snr_cmd->add_option("--policy", o.policies, "fixed|at-inf|at-sup|midpoint")->delimiter(',');
  sweep_alpha_cmd->add_option("--snr-db", o.snr_db, "Transmit SNR in dB (default 30)");
  auto* alpha_gains = sweep_alpha_cmd->add_option("--gains", o.gains, "Fixed pair g1,g2")->delimiter(',');
  validate->add_option("--snr-db", o.snr_db, "Transmit SNR in dB (default 10)");

  // Subcommand-specific defaults, applied before parsing fills the flags.
  region->preparse_callback([&](std::size_t) { o.format = "text"; });
  capacity->preparse_callback([&](std::size_t) { o.format = "text"; });
  for (auto* c : {sweep_snr_cmd, sweep_alpha_cmd, validate}) {
    c->preparse_callback([&, c](std::size_t) {
      o.format = "csv";
      if (c == sweep_snr_cmd) { o.start = 0; o.stop = 40; o.steps = 41; }
      if (c == sweep_alpha_cmd) { o.start = 0.01; o.stop = 0.99; o.steps = 99; o.snr_db = 30; }
      if (c == validate) o.snr_db = 10;
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*region) return cmd_region(o);
    if (*capacity) return cmd_capacity(o);
    if (*sweep_snr_cmd) return cmd_sweep_snr(o, snr_alpha->count() > 0);
    if (*sweep_alpha_cmd) return cmd_sweep_alpha(o, alpha_gains->count() > 0);
    if (*validate) return cmd_validate(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConvergenceError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitUsage;
}

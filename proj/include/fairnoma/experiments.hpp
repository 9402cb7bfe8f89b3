#pragma once

// Sweep drivers and emitters behind the fairnoma CLI. Every driver returns
// plain ResultRow vectors so the CLI only parses flags and picks a writer.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "fairnoma/channel_model.hpp"
#include "fairnoma/ergodic_analysis.hpp"
#include "fairnoma/monte_carlo.hpp"
#include "fairnoma/noma_core.hpp"

namespace fairnoma {

struct ResultRow {
  double sweep_value = 0.0;
  std::string quantity;
  std::string method;
  double value = 0.0;
  double error_bound = 0.0;  // Monte Carlo rows carry the standard error
};

enum class SweepVariable { SnrDb, Alpha };

struct MethodSet {
  bool closed_form = true;
  bool quadrature = true;
  bool monte_carlo = false;
};

struct SweepSpec {
  SweepVariable variable = SweepVariable::SnrDb;
  double start = 0.0;
  double stop = 40.0;
  int steps = 41;
  double beta = 1.0;
  double snr_db = 30.0;  // fixed SNR for alpha sweeps
  MethodSet methods;
  std::vector<AllocationPolicy> policies{AllocationPolicy::at_inf(), AllocationPolicy::midpoint(),
                                         AllocationPolicy::at_sup()};
  std::optional<ChannelPair> pair;  // alpha sweeps only: exact instead of expected
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 1;
  McOptions mc;
  QuadratureConfig quadrature;

  void validate() const {
    if (!(start < stop)) throw std::invalid_argument("--start must be < --stop");
    if (steps < 2) throw std::invalid_argument("--steps must be >= 2");
    if (samples < 1) throw std::invalid_argument("--samples must be >= 1");
    if (variable == SweepVariable::Alpha) {
      if (!(start > 0.0 && stop < 1.0)) {
        throw std::invalid_argument("--start/--stop must lie in (0, 1) for an alpha sweep");
      }
      if (pair && methods.monte_carlo) {
        throw std::invalid_argument("--gains and Monte Carlo expectation are mutually exclusive");
      }
    }
  }

  std::vector<double> grid() const {
    std::vector<double> g(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) {
      g[static_cast<std::size_t>(i)] = start + (stop - start) * i / (steps - 1);
    }
    g.back() = stop;
    return g;
  }
};

// ---------------------------------------------------------------------------
// Writers

/// Shortest round-trip decimal; identical across runs for identical doubles.
inline std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

inline void write_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
  os << "sweep_value,quantity,method,value,error_bound\r\n";
  for (const auto& r : rows) {
    os << format_number(r.sweep_value) << ',' << csv_field(r.quantity) << ','
       << csv_field(r.method) << ',' << format_number(r.value) << ','
       << format_number(r.error_bound) << "\r\n";
  }
}

inline nlohmann::json to_json(const std::vector<ResultRow>& rows) {
  auto arr = nlohmann::json::array();
  for (const auto& r : rows) {
    arr.push_back({{"sweep_value", r.sweep_value},
                   {"quantity", r.quantity},
                   {"method", r.method},
                   {"value", r.value},
                   {"error_bound", r.error_bound}});
  }
  return arr;
}

inline void write_json(std::ostream& os, const std::vector<ResultRow>& rows) {
  os << to_json(rows).dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Single-pair summaries

inline std::string policy_label(const AllocationPolicy& p) {
  return std::string(to_string(p.kind));
}

inline void append_report(std::vector<ResultRow>& rows, double sweep_value,
                          const CapacityReport& r, std::string_view method) {
  const std::string m(method);
  rows.push_back({sweep_value, "c1_oma", m, r.c1_oma, 0.0});
  rows.push_back({sweep_value, "c2_oma", m, r.c2_oma, 0.0});
  rows.push_back({sweep_value, "sum_oma", m, r.sum_oma, 0.0});
  rows.push_back({sweep_value, "c1_noma", m, r.c1_noma, 0.0});
  rows.push_back({sweep_value, "c2_noma", m, r.c2_noma, 0.0});
  rows.push_back({sweep_value, "sum_noma", m, r.sum_noma, 0.0});
}

struct RegionSummary {
  ChannelPair pair;
  double snr_db;
  FairRegion region;
  CapacityReport at_inf;
  CapacityReport at_sup;
};

inline RegionSummary summarize_region(const SystemParams& params, const ChannelPair& pair) {
  const FairRegion region = fair_region(params, pair);
  return {pair, params.snr_db(), region,
          capacity_report(params, pair, PowerAllocation(region.a_inf)),
          capacity_report(params, pair, PowerAllocation(region.a_sup))};
}

inline nlohmann::json report_json(const CapacityReport& r) {
  return {{"a", r.a_used},          {"c1_oma", r.c1_oma},     {"c2_oma", r.c2_oma},
          {"sum_oma", r.sum_oma},   {"c1_noma", r.c1_noma},   {"c2_noma", r.c2_noma},
          {"sum_noma", r.sum_noma}};
}

inline nlohmann::json to_json(const RegionSummary& s) {
  return {{"gains", {s.pair.weak(), s.pair.strong()}},
          {"snr_db", s.snr_db},
          {"a_inf", s.region.a_inf},
          {"a_sup", s.region.a_sup},
          {"at_a_inf", report_json(s.at_inf)},
          {"at_a_sup", report_json(s.at_sup)}};
}

inline std::vector<ResultRow> region_rows(const RegionSummary& s) {
  std::vector<ResultRow> rows;
  rows.push_back({s.region.a_inf, "a_inf", "closed-form", s.region.a_inf, 0.0});
  append_report(rows, s.region.a_inf, s.at_inf, "closed-form");
  rows.push_back({s.region.a_sup, "a_sup", "closed-form", s.region.a_sup, 0.0});
  append_report(rows, s.region.a_sup, s.at_sup, "closed-form");
  return rows;
}

// ---------------------------------------------------------------------------
// Sweeps

namespace detail {

inline void append_mc(std::vector<ResultRow>& rows, double x, std::string name,
                      const McResult& r) {
  rows.push_back({x, std::move(name), "monte-carlo", r.mean, r.std_error});
}

}  // namespace detail

/// Ergodic capacities against transmit SNR (dB): closed-form OMA, quadrature
/// for the boundary NOMA allocations, and optional Monte Carlo per policy.
inline std::vector<ResultRow> sweep_snr(const SweepSpec& spec) {
  spec.validate();
  std::vector<ResultRow> rows;
  for (double db : spec.grid()) {
    const auto params = SystemParams::from_db(db, spec.beta);
    if (spec.methods.closed_form) {
      rows.push_back({db, "c1_oma", "closed-form", ergodic_c1_oma(params).value, 0.0});
      rows.push_back({db, "c2_oma", "closed-form", ergodic_c2_oma(params).value, 0.0});
      rows.push_back({db, "sum_oma", "closed-form", ergodic_sum_oma(params).value, 0.0});
    }
    if (spec.methods.quadrature) {
      const double c1o = ergodic_c1_oma(params).value;
      const double c2o = ergodic_c2_oma(params).value;
      try {
        const auto c1 = ergodic_c1_noma_at_a_inf(params, spec.quadrature);
        rows.push_back({db, "c1_noma:at_inf", "quadrature", c1.value, c1.error_bound});
        rows.push_back({db, "sum_noma:at_inf", "quadrature", c1.value + c2o, c1.error_bound});
      } catch (const ConvergenceError&) {
        const auto policy = AllocationPolicy::at_inf();
        detail::append_mc(rows, db, "c1_noma:at_inf",
                          estimate(params, policy, Quantity::C1Noma, spec.samples, spec.seed, spec.mc));
        detail::append_mc(rows, db, "sum_noma:at_inf",
                          estimate(params, policy, Quantity::SumNoma, spec.samples, spec.seed, spec.mc));
      }
      try {
        const auto c2 = ergodic_c2_noma_at_a_sup(params, spec.quadrature);
        rows.push_back({db, "c2_noma:at_sup", "quadrature", c2.value, c2.error_bound});
        rows.push_back({db, "sum_noma:at_sup", "quadrature", c2.value + c1o, c2.error_bound});
      } catch (const ConvergenceError&) {
        const auto policy = AllocationPolicy::at_sup();
        detail::append_mc(rows, db, "c2_noma:at_sup",
                          estimate(params, policy, Quantity::C2Noma, spec.samples, spec.seed, spec.mc));
        detail::append_mc(rows, db, "sum_noma:at_sup",
                          estimate(params, policy, Quantity::SumNoma, spec.samples, spec.seed, spec.mc));
      }
    }
    if (spec.methods.monte_carlo) {
      const auto none = AllocationPolicy::midpoint();
      for (auto q : {Quantity::C1Oma, Quantity::C2Oma, Quantity::SumOma}) {
        detail::append_mc(rows, db, std::string(to_string(q)),
                          estimate(params, none, q, spec.samples, spec.seed, spec.mc));
      }
      for (const auto& policy : spec.policies) {
        const std::string tag = ":" + policy_label(policy);
        for (auto q : {Quantity::C1Noma, Quantity::C2Noma, Quantity::SumNoma}) {
          detail::append_mc(rows, db, std::string(to_string(q)) + tag,
                            estimate(params, policy, q, spec.samples, spec.seed, spec.mc));
        }
        detail::append_mc(rows, db, "gap" + tag,
                          paired_gap(params, policy, spec.samples, spec.seed, spec.mc));
      }
    }
  }
  return rows;
}

/// Capacities against the allocation a at fixed SNR. With a fixed pair the
/// values are exact; otherwise they are Monte Carlo expectations, and the
/// first grid point also carries the E[a_inf] / E[a_sup] reference markers.
inline std::vector<ResultRow> sweep_alpha(const SweepSpec& spec) {
  spec.validate();
  const auto params = SystemParams::from_db(spec.snr_db, spec.beta);
  std::vector<ResultRow> rows;
  const auto grid = spec.grid();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double a = grid[i];
    if (spec.pair) {
      if (i == 0) {
        const FairRegion region = fair_region(params, *spec.pair);
        rows.push_back({a, "a_inf_marker", "closed-form", region.a_inf, 0.0});
        rows.push_back({a, "a_sup_marker", "closed-form", region.a_sup, 0.0});
      }
      const auto r = capacity_report(params, *spec.pair, PowerAllocation(a));
      rows.push_back({a, "c1_oma", "closed-form", r.c1_oma, 0.0});
      rows.push_back({a, "c2_oma", "closed-form", r.c2_oma, 0.0});
      rows.push_back({a, "sum_oma", "closed-form", r.sum_oma, 0.0});
      rows.push_back({a, "c1_noma", "closed-form", r.c1_noma, 0.0});
      rows.push_back({a, "c2_noma", "closed-form", r.c2_noma, 0.0});
      rows.push_back({a, "sum_noma", "closed-form", r.sum_noma, 0.0});
      continue;
    }
    if (i == 0) {
      const auto markers = region_markers(params, spec.samples, spec.seed, spec.mc);
      detail::append_mc(rows, a, "a_inf_marker", markers.a_inf);
      detail::append_mc(rows, a, "a_sup_marker", markers.a_sup);
      rows.push_back({a, "c1_oma", "closed-form", ergodic_c1_oma(params).value, 0.0});
      rows.push_back({a, "c2_oma", "closed-form", ergodic_c2_oma(params).value, 0.0});
      rows.push_back({a, "sum_oma", "closed-form", ergodic_sum_oma(params).value, 0.0});
    }
    const auto policy = AllocationPolicy::fixed(a);
    for (auto q : {Quantity::C1Noma, Quantity::C2Noma, Quantity::SumNoma}) {
      detail::append_mc(rows, a, std::string(to_string(q)),
                        estimate(params, policy, q, spec.samples, spec.seed, spec.mc));
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Cross-method validation

struct ValidationCheck {
  std::string name;
  std::string reference_method;
  double reference = 0.0;
  double reference_error = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
  double delta = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct ValidationConfig {
  double snr_db = 10.0;
  double beta = 1.0;
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 1;
  McOptions mc;
  QuadratureConfig quadrature;
};

/// Compares every analytic ergodic quantity with Monte Carlo on common seeds.
/// A check passes when |estimate - reference| <= max(3 std_error, reference error).
template <class E1 = ScaledE1>
std::vector<ValidationCheck> run_validation(const ValidationConfig& cfg, E1 e1 = {}) {
  const auto params = SystemParams::from_db(cfg.snr_db, cfg.beta);
  std::vector<ValidationCheck> checks;
  const auto add = [&](std::string name, const ErgodicEstimate& ref, const McResult& mc) {
    ValidationCheck c;
    c.name = std::move(name);
    c.reference_method = std::string(to_string(ref.method));
    c.reference = ref.value;
    c.reference_error = ref.error_bound;
    c.estimate = mc.mean;
    c.std_error = mc.std_error;
    c.delta = mc.mean - ref.value;
    c.tolerance = std::max(3.0 * mc.std_error, ref.error_bound);
    c.pass = std::isfinite(c.delta) && std::abs(c.delta) <= c.tolerance;
    checks.push_back(std::move(c));
  };
  const auto mc = [&](const AllocationPolicy& p, Quantity q) {
    return estimate(params, p, q, cfg.samples, cfg.seed, cfg.mc);
  };
  const auto any = AllocationPolicy::midpoint();
  const auto c1o = ergodic_c1_oma(params, e1);
  const auto c2o = ergodic_c2_oma(params, e1);
  add("c1_oma", c1o, mc(any, Quantity::C1Oma));
  add("c2_oma", c2o, mc(any, Quantity::C2Oma));
  add("sum_oma", ergodic_sum_oma(params, e1), mc(any, Quantity::SumOma));
  add("c1_noma:at_inf", ergodic_c1_noma_at_a_inf(params, cfg.quadrature),
      mc(AllocationPolicy::at_inf(), Quantity::C1Noma));
  add("c2_noma:at_sup", ergodic_c2_noma_at_a_sup(params, cfg.quadrature),
      mc(AllocationPolicy::at_sup(), Quantity::C2Noma));
  add("c1_noma:at_sup=c1_oma", c1o, mc(AllocationPolicy::at_sup(), Quantity::C1Noma));
  add("c2_noma:at_inf=c2_oma", c2o, mc(AllocationPolicy::at_inf(), Quantity::C2Noma));
  return checks;
}

inline bool all_passed(const std::vector<ValidationCheck>& checks) {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return !checks.empty();
}

inline void write_csv(std::ostream& os, const std::vector<ValidationCheck>& checks) {
  os << "check,reference_method,reference,reference_error,estimate,std_error,delta,tolerance,"
        "result\r\n";
  for (const auto& c : checks) {
    os << csv_field(c.name) << ',' << c.reference_method << ',' << format_number(c.reference)
       << ',' << format_number(c.reference_error) << ',' << format_number(c.estimate) << ','
       << format_number(c.std_error) << ',' << format_number(c.delta) << ','
       << format_number(c.tolerance) << ',' << (c.pass ? "pass" : "FAIL") << "\r\n";
  }
}

inline void write_json(std::ostream& os, const std::vector<ValidationCheck>& checks) {
  auto arr = nlohmann::json::array();
  for (const auto& c : checks) {
    arr.push_back({{"check", c.name},
                   {"reference_method", c.reference_method},
                   {"reference", c.reference},
                   {"reference_error", c.reference_error},
                   {"estimate", c.estimate},
                   {"std_error", c.std_error},
                   {"delta", c.delta},
                   {"tolerance", c.tolerance},
                   {"pass", c.pass}});
  }
  os << arr.dump(2) << '\n';
}

}  // namespace fairnoma

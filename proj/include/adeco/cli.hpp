#pragma once

#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "adeco/config.hpp"
#include "adeco/errors.hpp"
#include "adeco/format.hpp"
#include "adeco/magic_echo.hpp"
#include "adeco/oracles.hpp"
#include "adeco/pair_phonon.hpp"

namespace adeco::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kOracleFailure = 2 };

struct UsageError : Error {
  using Error::Error;
};

/// Inclusive grid "start:stop:steps" with steps >= 1 points.
struct Grid {
  double start = 0.0;
  double stop = 0.0;
  int steps = 1;

  [[nodiscard]] std::vector<double> linear() const {
    std::vector<double> v;
    for (int i = 0; i < steps; ++i)
      v.push_back(steps == 1 ? start : start + (stop - start) * i / (steps - 1));
    return v;
  }
  [[nodiscard]] std::vector<double> geometric() const {
    if (!(start > 0.0)) throw UsageError("bad grid: geometric grid needs start > 0");
    std::vector<double> v;
    const double lo = std::log10(start);
    const double hi = std::log10(stop);
    for (int i = 0; i < steps; ++i)
      v.push_back(steps == 1 ? start : std::pow(10.0, lo + (hi - lo) * i / (steps - 1)));
    v.front() = start;
    if (steps > 1) v.back() = stop;
    return v;
  }
};

[[nodiscard]] inline Grid parse_grid(const std::string& s) {
  const auto c1 = s.find(':');
  const auto c2 = c1 == std::string::npos ? std::string::npos : s.find(':', c1 + 1);
  if (c2 == std::string::npos || s.find(':', c2 + 1) != std::string::npos)
    throw UsageError("bad grid '" + s + "': expected start:stop:steps");
  const auto a = detail::to_double(detail::trim(std::string_view(s).substr(0, c1)));
  const auto b = detail::to_double(detail::trim(std::string_view(s).substr(c1 + 1, c2 - c1 - 1)));
  const auto n = detail::to_double(detail::trim(std::string_view(s).substr(c2 + 1)));
  if (!a || !b || !n) throw UsageError("bad grid '" + s + "': non-numeric field");
  if (!std::isfinite(*a) || !std::isfinite(*b)) throw UsageError("bad grid '" + s + "': non-finite bound");
  if (*n < 1 || *n != std::floor(*n) || *n > 1e7) throw UsageError("bad grid '" + s + "': steps must be a positive integer");
  if (*b < *a) throw UsageError("bad grid '" + s + "': must be ascending");
  if (*n > 1 && *b == *a) throw UsageError("bad grid '" + s + "': repeated points");
  return {*a, *b, static_cast<int>(*n)};
}

// ------------------------------------------------------------------ constants

inline void cmd_constants(const PhysicalConfig& cfg, std::ostream& os) {
  const auto r = rate_constants(cfg);
  os << "quantity,value,unit\n";
  auto row = [&](const char* name, double v, const char* unit) {
    os << name << ',' << fmt17(v) << ',' << unit << '\n';
  };
  row("Omega0", r.Omega0, "rad/s");
  row("nu0", r.nu0 * 1e-3, "kHz");
  row("nu_hat0", r.nu_hat0 * 1e-3, "kHz");
  row("nuD", r.nuD * 1e-3, "kHz");
  row("tau_gamma", r.tau_gamma, "s");
  row("tau_gamma_min", r.tau_gamma_min, "s");
  row("sigma_X", r.sigma_X, "1");
  row("sigma_Xprime", r.sigma_Xprime, "1");
  row("tau_X", r.tau_X * 1e6, "us");
  row("tau_hat_X", r.tau_X / 3.0 * 1e6, "us");
  row("tau_me_X", 2.0 * r.tau_X * 1e6, "us");
  row("tau_hat_me_X", 2.0 * r.tau_X / 3.0 * 1e6, "us");
}

// --------------------------------------------------------------------- evolve

enum class EvolveMode { free, magic_echo };

inline void cmd_evolve(const PhysicalConfig& cfg, EvolveMode mode, bool exact_path,
                       const std::vector<double>& times, std::ostream& os) {
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw UsageError("bad grid: times must be ascending");
  for (double t : times)
    if (!(t >= 0.0)) throw UsageError("bad grid: times must be non-negative");
  const auto path = exact_path ? EvolutionPath::exact : EvolutionPath::approximate;
  const auto sigma0 = initial_after_pulse(cfg.omega0_larmor, cfg.T);
  os << "t_s";
  for (auto m : all_levels)
    for (auto n : all_levels)
      os << ",re_" << name_of(m) << '_' << name_of(n) << ",im_" << name_of(m) << '_' << name_of(n);
  os << '\n';
  for (double t : times) {
    const auto s = mode == EvolveMode::free ? free_sigma(cfg, sigma0, t, path) : me_sigma(cfg, sigma0, t, path);
    os << fmt17(t);
    for (std::size_t m = 0; m < kPairLevels; ++m)
      for (std::size_t n = 0; n < kPairLevels; ++n)
        os << ',' << fmt17(s(m, n).real()) << ',' << fmt17(s(m, n).imag());
    os << '\n';
  }
}

// ---------------------------------------------------------------------- sweep

/// tau_X over a geometric grid in N and a linear grid in v_s.
inline void cmd_sweep(const PhysicalConfig& cfg, const std::vector<double>& n_values,
                      const std::vector<double>& vs_values, std::ostream& os) {
  os << "N,v_s_mps,tau_X_us\n";
  for (double n : n_values) {
    for (double v : vs_values) {
      PhysicalConfig c = cfg;
      c.N = n;
      c.v_s = v;
      try {
        validate(c);
      } catch (const ConfigError& e) {
        throw UsageError(std::string("bad range: ") + e.what());
      }
      os << fmt17(n) << ',' << fmt17(v) << ',' << fmt17(rate_constants(c).tau_X * 1e6) << '\n';
    }
  }
}

// --------------------------------------------------------------------- oracle

struct OracleOptions {
  std::string which = "all";
  std::optional<double> tol;  // relative tolerance of the Fock comparison
  FockGrid fock_grid{};
  PhysicalConfig ksum_config = gypsum_defaults();
};

/// Writes a JSON report; returns true when every check passes.
inline bool cmd_oracle(const OracleOptions& opt, std::ostream& os) {
  const bool all = opt.which == "all";
  if (!all && opt.which != "fock" && opt.which != "eigdist" && opt.which != "ksum")
    throw UsageError("unknown oracle '" + opt.which + "' (fock|eigdist|ksum|all)");
  nlohmann::ordered_json report;
  bool pass = true;
  if (all || opt.which == "fock") {
    FockTolerances tol;
    if (opt.tol) tol.rel = *opt.tol;
    const auto pts = run_fock_oracle(opt.fock_grid, tol);
    bool ok = true;
    for (const auto& p : pts) ok = ok && p.pass;
    report["fock"] = {{"pass", ok}, {"tolerance", tol.rel}, {"points", fock_report_json(pts)}};
    pass = pass && ok;
  }
  if (all || opt.which == "eigdist") {
    const auto checks = run_eigdist_oracle();
    bool ok = true;
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
      ok = ok && c.pass;
      arr.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    }
    report["eigdist"] = {{"pass", ok}, {"checks", arr}};
    pass = pass && ok;
  }
  if (all || opt.which == "ksum") {
    const auto checks = run_ksum_oracle(opt.ksum_config);
    bool ok = true;
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
      ok = ok && c.pass;
      arr.push_back({{"name", c.name},
                     {"discrete", c.discrete},
                     {"closed", c.closed},
                     {"rel_err", c.rel_err},
                     {"in_window", c.in_window},
                     {"pass", c.pass}});
    }
    report["ksum"] = {{"pass", ok}, {"checks", arr}};
    pass = pass && ok;
  }
  report["pass"] = pass;
  os << report.dump(2) << '\n';
  return pass;
}

// -------------------------------------------------------------------- compare

/// Writes the comparison CSV and, when requested, the envelope curves.
inline void cmd_compare(const PhysicalConfig& cfg, std::string_view csv_text, std::ostream& os,
                        std::ostream* envelopes = nullptr) {
  const auto rows = compare_experiment(parse_experiment_csv(csv_text), cfg.v_s, cfg.N);
  os << "nu_hat_khz,tau_exp_us,tau_theory_us,residual_us\n";
  for (const auto& r : rows)
    os << fmt17(r.nu_hat_khz) << ',' << fmt17(r.tau_exp * 1e6) << ',' << fmt17(r.tau_theory * 1e6) << ','
       << fmt17(r.residual * 1e6) << '\n';
  if (envelopes) {
    *envelopes << "nu_hat_khz,tau_low_us,tau_high_us\n";
    for (const auto& r : rows)
      *envelopes << fmt17(r.nu_hat_khz) << ',' << fmt17(r.tau_low * 1e6) << ',' << fmt17(r.tau_high * 1e6)
                 << '\n';
  }
}

// -------------------------------------------------------------------- driver

struct CommandSpec {
  std::string subcommand;
  std::optional<std::string> config_path;
  std::optional<std::string> out_path;
  std::string mode = "free";
  bool exact_path = false;
  std::optional<double> tol;
  std::optional<std::string> grid;     // evolve time grid, seconds
  std::optional<std::string> n_grid;   // sweep, geometric
  std::optional<std::string> vs_grid;  // sweep, linear
  std::string oracle = "all";
  std::optional<std::string> csv_path;
};

[[nodiscard]] inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

[[nodiscard]] inline PhysicalConfig load_config(const CommandSpec& spec) {
  if (!spec.config_path) throw UsageError("--config is required for " + spec.subcommand);
  return parse_config(read_file(*spec.config_path));
}

/// Runs one subcommand and maps failures onto exit codes.
inline int run(const CommandSpec& spec, std::ostream& out, std::ostream& err) {
  try {
    std::ofstream file;
    std::ostream* os = &out;
    auto open_out = [&] {
      if (spec.out_path) {
        file.open(*spec.out_path, std::ios::binary);
        if (!file) throw UsageError("cannot write " + *spec.out_path);
        os = &file;
      }
    };

    if (spec.subcommand == "constants") {
      const auto cfg = load_config(spec);
      open_out();
      cmd_constants(cfg, *os);
    } else if (spec.subcommand == "evolve") {
      const auto cfg = load_config(spec);
      EvolveMode mode;
      if (spec.mode == "free") mode = EvolveMode::free;
      else if (spec.mode == "me") mode = EvolveMode::magic_echo;
      else throw UsageError("--mode must be free or me");
      const auto times = parse_grid(spec.grid.value_or("0:2e-4:201")).linear();
      open_out();
      cmd_evolve(cfg, mode, spec.exact_path, times, *os);
    } else if (spec.subcommand == "sweep") {
      const auto cfg = load_config(spec);
      const auto ns = parse_grid(spec.n_grid.value_or("1e21:1e25:9")).geometric();
      const auto vs = parse_grid(spec.vs_grid.value_or("2000:8000:7")).linear();
      open_out();
      cmd_sweep(cfg, ns, vs, *os);
    } else if (spec.subcommand == "oracle") {
      OracleOptions opt;
      opt.which = spec.oracle;
      opt.tol = spec.tol;
      if (spec.config_path) opt.ksum_config = load_config(spec);
      open_out();
      if (!cmd_oracle(opt, *os)) {
        err << "oracle: one or more checks failed\n";
        return kOracleFailure;
      }
    } else if (spec.subcommand == "compare") {
      const auto cfg = load_config(spec);
      if (!spec.csv_path) throw UsageError("compare needs an experiment CSV path");
      const auto text = read_file(*spec.csv_path);
      std::ostringstream report;
      std::ostringstream env;
      cmd_compare(cfg, text, report, &env);
      open_out();
      *os << report.str();
      if (spec.out_path) {
        std::ofstream ef(*spec.out_path + ".envelopes.csv", std::ios::binary);
        if (!ef) throw UsageError("cannot write " + *spec.out_path + ".envelopes.csv");
        ef << env.str();
      }
    } else {
      throw UsageError("unknown subcommand '" + spec.subcommand + "'");
    }
    return kOk;
  } catch (const CsvError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace adeco::cli

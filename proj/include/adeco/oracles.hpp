#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <tuple>
#include <utility>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "adeco/config.hpp"
#include "adeco/deco_core.hpp"
#include "adeco/eigdist.hpp"
#include "adeco/fock_oracle.hpp"
#include "adeco/format.hpp"
#include "adeco/magic_echo.hpp"
#include "adeco/pair_phonon.hpp"

namespace adeco {

// ---------------------------------------------------------------- Fock oracle

struct FockGrid {
  std::vector<std::complex<double>> lambdas{{0.3, 0.0}, {-0.3, 0.0}, {0.0, 0.2}, {0.0, -0.2}, {0.5, 0.0}};
  std::vector<double> beta_omegas{0.05, 0.1, 1.0, 5.0};
  std::vector<double> omega_ts{0.5, pi, 10.0};
  int doublings = 3;
};

struct FockTolerances {
  double rel = 1e-8;
  // Below this modulus the comparison is absolute: rel * floor equals the
  // cutoff convergence tolerance.
  double modulus_floor = 1e-2;
  double convergence = 1e-10;
};

struct FockPoint {
  bool reversal = false;
  std::complex<double> lambda_m;  // in units of omega
  std::complex<double> lambda_n;
  double beta_omega = 0.0;
  double omega_t = 0.0;  // total time
  std::complex<double> closed_form;
  std::complex<double> numeric;
  double rel_err = 0.0;    // |numeric - closed| / |closed|
  double mixed_err = 0.0;  // |numeric - closed| / max(|closed|, floor)
  int n_max = 0;
  bool converged = false;
  bool pass = false;
};

/// Closed form versus truncated-Fock trace over the grid, free and echo
/// sequences. omega = 1, so lambda and times are in units of omega.
[[nodiscard]] inline std::vector<FockPoint> run_fock_oracle(const FockGrid& grid = {},
                                                            const FockTolerances& tol = {}) {
  std::vector<FockPoint> points;
  double max_l = 0.0;
  for (auto l : grid.lambdas) max_l = std::max(max_l, std::abs(l));

  for (double bw : grid.beta_omegas) {
    const std::size_t first = points.size();
    for (int rev = 0; rev < 2; ++rev)
      for (auto lm : grid.lambdas)
        for (auto ln : grid.lambdas)
          for (double wt : grid.omega_ts) {
            FockPoint p;
            p.reversal = rev == 1;
            p.lambda_m = lm;
            p.lambda_n = ln;
            p.beta_omega = bw;
            p.omega_t = wt;
            p.closed_form = p.reversal ? reversal_exponent_k(lm, ln, 1.0, bw, magic_echo_schedule(wt)).s()
                                       : decoherence_exponent_k(lm, ln, 1.0, bw, wt).s();
            points.push_back(p);
          }
    const std::size_t last = points.size();

    const auto schedule = cutoff_schedule(bw, max_l, grid.doublings);
    std::vector<std::complex<double>> prev(last - first);
    for (std::size_t level = 0; level < schedule.size(); ++level) {
      bool pending = false;
      for (std::size_t i = first; i < last; ++i) pending = pending || !points[i].converged;
      if (!pending) break;

      const TruncatedMode mode(schedule[level], 1.0);
      const Eigen::VectorXd theta = thermal_weights(mode, bw);
      const Eigen::Index cols = detail::occupied_columns(theta);
      std::map<std::pair<std::size_t, int>, HermitianPropagator> props;
      auto prop = [&](std::size_t li, int scaled) -> const HermitianPropagator& {
        auto key = std::make_pair(li, scaled);
        auto it = props.find(key);
        if (it == props.end())
          it = props.emplace(key, HermitianPropagator(mode.generator(grid.lambdas[li], scaled ? -0.5 : 1.0))).first;
        return it->second;
      };
      // Left factors per (lambda, time, kind), shared across all pairs.
      std::map<std::tuple<int, std::size_t, std::size_t>, Eigen::MatrixXcd> left;
      auto left_of = [&](int rev, std::size_t li, std::size_t ti) -> const Eigen::MatrixXcd& {
        auto key = std::make_tuple(rev, li, ti);
        auto it = left.find(key);
        if (it == left.end()) {
          const double wt = grid.omega_ts[ti];
          Eigen::MatrixXcd m;
          if (rev == 0) {
            m = prop(li, 0).columns(wt, cols);
          } else {
            const auto s = magic_echo_schedule(wt);
            m = prop(li, 1).apply(s.t_B, prop(li, 0).columns(s.t_F, cols));
          }
          it = left.emplace(key, std::move(m)).first;
        }
        return it->second;
      };

      const std::size_t nl = grid.lambdas.size();
      const std::size_t nt = grid.omega_ts.size();
      for (std::size_t i = first; i < last; ++i) {
        auto& p = points[i];
        if (p.converged) continue;
        const std::size_t local = i - first;
        const int rev = p.reversal ? 1 : 0;
        const std::size_t ti = local % nt;
        const std::size_t li_n = (local / nt) % nl;
        const std::size_t li_m = (local / (nt * nl)) % nl;
        const auto v = detail::thermal_trace(left_of(rev, li_m, ti), theta, left_of(rev, li_n, ti));
        if (level > 0 && std::abs(v - prev[local]) < tol.convergence) p.converged = true;
        prev[local] = v;
        p.numeric = v;
        p.n_max = schedule[level];
      }
    }
  }

  for (auto& p : points) {
    const double diff = std::abs(p.numeric - p.closed_form);
    const double mod = std::abs(p.closed_form);
    p.rel_err = diff / mod;
    p.mixed_err = diff / std::max(mod, tol.modulus_floor);
    p.pass = p.converged && p.mixed_err <= tol.rel;
  }
  return points;
}

[[nodiscard]] inline nlohmann::json fock_report_json(const std::vector<FockPoint>& pts) {
  auto cplx = [](std::complex<double> z) { return nlohmann::json::array({z.real(), z.imag()}); };
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& p : pts) {
    arr.push_back({{"inputs",
                    {{"kind", p.reversal ? "reversal" : "free"},
                     {"lambda_m_over_omega", cplx(p.lambda_m)},
                     {"lambda_n_over_omega", cplx(p.lambda_n)},
                     {"beta_omega", p.beta_omega},
                     {"omega_t", p.omega_t}}},
                   {"closed_form", cplx(p.closed_form)},
                   {"numeric", cplx(p.numeric)},
                   {"rel_err", p.rel_err},
                   {"mixed_err", p.mixed_err},
                   {"n_max", p.n_max},
                   {"converged", p.converged},
                   {"pass", p.pass}});
  }
  return arr;
}

// ------------------------------------------------------------- eigdist oracle

/// Brute-force enumeration over all 4^N level assignments.
[[nodiscard]] inline EigCountTable enumerate_counts(int n) {
  if (n < 1 || n > 10) throw DomainError("enumerate_counts: N must be in [1, 10]");
  EigCountTable t(n);
  const std::size_t total = std::size_t{1} << (2 * n);
  for (std::size_t code = 0; code < total; ++code) {
    int x = 0;
    for (int i = 0; i < n; ++i) x += kappa_of((code >> (2 * i)) & 3u);
    t.at(x) += 1;
  }
  return t;
}

struct OracleCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

[[nodiscard]] inline std::vector<OracleCheck> run_eigdist_oracle(int max_n = 20) {
  std::vector<OracleCheck> out;
  for (int n = 1; n <= std::min(max_n, 8); ++n) {
    const auto conv = exact_counts(n);
    out.push_back({"convolution_vs_enumeration_N" + std::to_string(n), conv == enumerate_counts(n), ""});
    out.push_back({"convolution_vs_multinomial_N" + std::to_string(n), conv == multinomial_counts(n), ""});
  }
  double prev_ks = 1.0;
  for (int n = 1; n <= max_n; ++n) {
    const auto t = exact_counts(n);
    const auto m = dist_moments(t);
    const bool ok = t.total() == (BigInt(1) << (2 * n)) && m.mean == 0 && m.variance == Rational(3 * n, 2) &&
                    t.count(n) == (BigInt(1) << n) && t.count(-2 * n) == 1;
    out.push_back({"total_moments_support_N" + std::to_string(n), ok, ""});
    if (n % 4 == 0) {
      const double ks = kolmogorov_distance(t);
      out.push_back({"kolmogorov_nonincreasing_N" + std::to_string(n), ks <= prev_ks, "D=" + fmt17(ks)});
      prev_ks = ks;
    }
  }
  return out;
}

// ---------------------------------------------------------------- k-sum oracle

struct KsumCheck {
  std::string name;
  double discrete = 0.0;
  double closed = 0.0;
  double rel_err = 0.0;
  bool in_window = false;
  bool pass = false;
};

[[nodiscard]] inline KsumCheck ksum_check(std::string name, double discrete, double closed,
                                          bool in_window, double tol) {
  KsumCheck c{std::move(name), discrete, closed, 0.0, in_window, false};
  c.rel_err = (discrete - closed) / std::abs(closed);
  c.pass = std::abs(c.rel_err) <= tol;
  return c;
}

/// Discrete mode sums against the continuum kernels at a time inside the
/// finite-chain window. The separated-pair kernel uses the small-kd coupling,
/// for which the continuum limit is taken.
[[nodiscard]] inline std::vector<KsumCheck> run_ksum_oracle(const PhysicalConfig& cfg, double t = 1e-10,
                                                            double tol = 0.02) {
  std::vector<KsumCheck> out;
  const auto d0 = discrete_kernel_sums(cfg, t, 0.0, CouplingForm::exact);
  const auto c = closed_kernels(cfg, t);
  out.push_back(ksum_check("gamma", d0.gamma, c.gamma, d0.in_window, tol));
  out.push_back(ksum_check("epsilon", d0.epsilon, c.epsilon, d0.in_window, tol));
  out.push_back(ksum_check("zeta_x0", d0.zeta, zeta_closed(cfg, 0.0, t), d0.in_window, tol));
  for (int q : {1, 3}) {
    const double x = q * cfg.a;
    const auto d = discrete_kernel_sums(cfg, t, x, CouplingForm::small_kd);
    out.push_back(ksum_check("zeta_x" + std::to_string(q) + "a_small_kd", d.zeta, zeta_closed(cfg, x, t),
                             d.in_window, tol));
  }
  return out;
}

}  // namespace adeco

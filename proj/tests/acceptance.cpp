// Acceptance checks. One PASS/FAIL line per criterion; exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "adeco/deco_core.hpp"
#include "adeco/eigdist.hpp"
#include "adeco/fock_oracle.hpp"
#include "adeco/magic_echo.hpp"
#include "adeco/oracles.hpp"
#include "adeco/pair_phonon.hpp"

using namespace adeco;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

struct Report {
  int failed = 0;
  void line(int id, bool pass, const std::string& detail, double seconds) {
    std::printf("criterion %2d: %s  (%.2fs)  %s\n", id, pass ? "PASS" : "FAIL", seconds, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failed;
  }
};

struct Detail {
  std::ostringstream os;
  bool ok = true;
  void check(const std::string& what, double got, double want, double tol) {
    const double e = rel(got, want);
    const bool p = e <= tol;
    ok = ok && p;
    os << what << "=" << got << (p ? "" : "!") << " ";
  }
  void flag(const std::string& what, bool p) {
    ok = ok && p;
    if (!p) os << what << "! ";
  }
};

using clock_type = std::chrono::steady_clock;
double since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

}  // namespace

int main() {
  Report report;
  const auto cfg = gypsum_defaults();
  const auto r = rate_constants(cfg);

  {  // 1: constants
    const auto t0 = clock_type::now();
    Detail d;
    d.check("nuD_kHz", r.nuD * 1e-3, 1.2e-8, 0.01);
    d.check("nu0_kHz", std::abs(r.nu0) * 1e-3, 16.8, 0.01);
    d.check("tau_gamma_s", r.tau_gamma, 1926.0, 0.01);
    d.check("Omega0", r.Omega0, -210.7e3, 0.005);
    report.line(1, d.ok, d.os.str(), since(t0));
  }

  {  // 2: thermal floor and Gaussian decay time
    const auto t0 = clock_type::now();
    Detail d;
    d.check("tau_gamma_min_s", r.tau_gamma_min, 214.0, 0.01);
    d.check("tau_X_us", r.tau_X * 1e6, 165.0, 0.02);
    d.check("sigma_X", r.sigma_X, std::sqrt(1.5 * std::pow(1e23, 2.0 / 3.0)), 1e-12);
    d.check("sigma_X_approx", r.sigma_X, 5.68e7, 0.002);
    report.line(2, d.ok, d.os.str(), since(t0));
  }

  {  // 3: sweep extremes and free oscillation
    const auto t0 = clock_type::now();
    Detail d;
    PhysicalConfig lo = cfg, hi = cfg;
    lo.N = 1e21;
    lo.v_s = 8000;
    hi.N = 1e25;
    hi.v_s = 2000;
    d.check("tau_X_lo_us", rate_constants(lo).tau_X * 1e6, 2343.0, 0.02);
    d.check("tau_X_hi_us", rate_constants(hi).tau_X * 1e6, 6.8, 0.02);
    d.check("nu_hat0_kHz", r.nu_hat0 * 1e-3, 50.4, 0.02);
    d.check("tau_hat_X_us", r.tau_X / 3.0 * 1e6, 55.0, 0.02);
    // The evolved element carries the same frequency and envelope.
    const auto s0 = initial_after_pulse(cfg.omega0_larmor, cfg.T);
    double worst = 0.0;
    for (int i = 0; i <= 200; ++i) {
      const double t = 2e-4 * i / 200.0;
      const double want = s0(0, 1).real() * std::cos(two_pi * r.nu_hat0 * t) * std::exp(-std::pow(3 * t / r.tau_X, 2));
      worst = std::max(worst, std::abs(free_sigma(cfg, s0, t)(0, 1).real() - want) / std::abs(s0(0, 1)));
    }
    d.flag("free_curve", worst <= 1e-12);
    report.line(3, d.ok, d.os.str(), since(t0));
  }

  {  // 4: echo factors
    const auto t0 = clock_type::now();
    Detail d;
    const auto s0 = initial_after_pulse(cfg.omega0_larmor, cfg.T);
    // Decay time read back from the (TPlus, TZero) element.
    const double t = 50e-6;
    const double ratio = std::abs(me_sigma(cfg, s0, t)(0, 1)) / std::abs(s0(0, 1));
    const double tau_me = 3.0 * t / std::sqrt(-std::log(ratio));
    d.check("tau_me_over_tau_X", tau_me / r.tau_X, 2.0, 1e-9);
    d.check("tau_hat_me_us", me_signal_decay_time(cfg) * 1e6, 110.0, 0.02);
    const double m = me_amplitude(cfg, me_signal_decay_time(cfg));
    d.flag("M_ME", std::abs(m - std::exp(-1.0)) <= 1e-12);
    d.os << "M_ME(tau)=" << m;
    report.line(4, d.ok, d.os.str(), since(t0));
  }

  {  // 5: Fock oracle
    const auto t0 = clock_type::now();
    const FockGrid grid;
    const FockTolerances tol;
    const auto pts = run_fock_oracle(grid, tol);
    int n = 0, mixed_fail = 0, strict_fail = 0, nonconv = 0, nmax = 0;
    double worst_mixed = 0.0, worst_rel = 0.0, min_mod = 1.0;
    for (const auto& p : pts) {
      ++n;
      mixed_fail += !p.pass;
      strict_fail += !(p.converged && p.rel_err <= tol.rel);
      nonconv += !p.converged;
      nmax = std::max(nmax, p.n_max);
      worst_mixed = std::max(worst_mixed, p.mixed_err);
      worst_rel = std::max(worst_rel, p.rel_err);
      min_mod = std::min(min_mod, std::abs(p.closed_form));
    }
    const bool pass = strict_fail == 0 && nmax <= 400;
    std::ostringstream os;
    os << "points=" << n << " strict_rel_fail=" << strict_fail << " worst_rel=" << worst_rel
       << " min|S|=" << min_mod << " n_max=" << nmax << " nonconverged=" << nonconv
       << " | floor-" << tol.modulus_floor << " metric fail=" << mixed_fail << " worst=" << worst_mixed;
    report.line(5, pass, os.str(), since(t0));
  }

  {  // 6: reversal additivity and displaced identity
    const auto t0 = clock_type::now();
    double worst_cf = 0.0;
    const std::vector<std::complex<double>> ls{{0.3, 0.0}, {-0.2, 0.1}, {0.0, 0.5}};
    for (double w : {0.5, 1.0, 3.0})
      for (double bw : {0.1, 1.0, 5.0})
        for (double tf : {0.0, 0.7, 3.0})
          for (double tb : {0.0, 1.1, 6.0})
            for (auto lm : ls)
              for (auto ln : ls) {
                const auto a = reversal_exponent_k(lm, ln, w, bw / w, {tf, tb, 1.0}).s();
                const auto b = decoherence_exponent_k(lm, ln, w, bw / w, tf + tb).s();
                worst_cf = std::max(worst_cf, std::abs(a - b));
              }
    double worst_num = 0.0;
    const TruncatedMode mode(120, 1.0);
    for (auto lm : ls)
      for (auto ln : ls) {
        const auto a = numeric_s_reversal(lm, ln, mode, 1.0, 1.3, 2.4, 1.0);
        const auto b = numeric_s_free(lm, ln, mode, 1.0, 3.7);
        worst_num = std::max(worst_num, std::abs(a - b));
      }
    double worst_disp = 0.0;
    for (double w : {0.5, 2.0})
      for (auto l : ls)
        for (double f : {1.0, -0.5}) {
          const TruncatedMode m(60, w);
          worst_disp = std::max(worst_disp, displaced_identity_residual(l * w, m, f) / w);
        }
    const bool pass = worst_cf <= 1e-12 && worst_num <= 1e-12 && worst_disp <= 1e-12;
    std::ostringstream os;
    os << "closed_form_diff=" << worst_cf << " fock_diff=" << worst_num << " displaced_residual/omega=" << worst_disp;
    report.line(6, pass, os.str(), since(t0));
  }

  {  // 7: eigenvalue distribution
    const auto t0 = clock_type::now();
    bool ok = true;
    for (int n = 1; n <= 20; ++n) {
      const auto t = exact_counts(n);
      const auto m = dist_moments(t);
      ok = ok && t.total() == (BigInt(1) << (2 * n)) && m.mean == 0 && m.variance == Rational(3 * n, 2);
    }
    std::ostringstream os;
    double prev = 1.0;
    for (int n : {4, 8, 12, 16, 20}) {
      const double ks = kolmogorov_distance(exact_counts(n));
      ok = ok && ks <= prev;
      prev = ks;
      os << "D" << n << "=" << ks << " ";
    }
    report.line(7, ok, os.str(), since(t0));
  }

  {  // 8: discrete mode sums at 1 us
    const auto t0 = clock_type::now();
    const double t = 1e-6;
    std::ostringstream os;
    bool ok = true;
    const auto c = closed_kernels(cfg, t);
    for (double x : {0.0, cfg.a, 3.0 * cfg.a}) {
      const auto dsum = discrete_kernel_sums(cfg, t, x, CouplingForm::exact);
      const double ez = rel(dsum.zeta, zeta_closed(cfg, x, t));
      ok = ok && ez <= 0.02;
      os << "zeta(" << x / cfg.a << "a)_rel=" << ez << " ";
      if (x == 0.0) {
        const double eg = rel(dsum.gamma, c.gamma), ee = rel(dsum.epsilon, c.epsilon);
        ok = ok && eg <= 0.02 && ee <= 0.02;
        os << "gamma_rel=" << eg << " epsilon_rel=" << ee << " in_window=" << dsum.in_window << " ";
      }
    }
    report.line(8, ok, os.str(), since(t0));
  }

  {  // 9: structural invariants
    const auto t0 = clock_type::now();
    Detail d;
    const auto s0 = initial_after_pulse(cfg.omega0_larmor, cfg.T);
    ReducedPairMatrix probe = s0;
    probe(0, 0) = 0.3;
    probe(3, 3) = -0.1;
    probe(0, 2) = probe(2, 0) = 0.2;
    for (auto path : {EvolutionPath::approximate, EvolutionPath::exact}) {
      ReducedPairMatrix prev_f = probe, prev_m = probe;
      for (int i = 1; i <= 100; ++i) {
        const double t = 6e-6 * i;
        const auto f = free_sigma(cfg, probe, t, path);
        const auto m = me_sigma(cfg, probe, t, path);
        for (const auto* s : {&f, &m}) {
          d.flag("hermitian", ((*s) - s->adjoint()).cwiseAbs().maxCoeff() <= 1e-18);
          d.flag("trace", s->trace() == probe.trace());
          d.flag("diagonal", s->diagonal() == probe.diagonal());
        }
        d.flag("monotone", (f.cwiseAbs().array() <= prev_f.cwiseAbs().array() * (1 + 1e-15)).all() &&
                               (m.cwiseAbs().array() <= prev_m.cwiseAbs().array() * (1 + 1e-15)).all());
        prev_f = f;
        prev_m = m;
      }
    }
    // Damping vanishes exactly when the couplings agree.
    const std::vector<std::complex<double>> ls{{0.3, 0.0}, {-0.3, 0.0}, {0.0, 0.2}, {0.3, 1e-9}};
    for (auto lm : ls)
      for (auto ln : ls)
        for (double wt : {0.5, 2.0, 10.0}) {
          const double g = decoherence_exponent_k(lm, ln, 1.0, 1.0, wt).gamma;
          d.flag("selection", (g == 0.0) == (lm == ln));
        }
    // Generic reduced matrix through the per-mode factors.
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(4, 4);
    Eigen::MatrixXcd table = Eigen::MatrixXcd::Ones(4, 4);
    Eigen::VectorXd energies(4);
    for (int m = 0; m < 4; ++m) {
      energies(m) = level_energy(cfg, kappa_of(static_cast<std::size_t>(m)));
      rho(m, m) = 0.25 + 0.05 * m - 0.075;
      for (int n = m + 1; n < 4; ++n) {
        rho(m, n) = std::complex<double>(0.01 * (m + 1), -0.02 * n);
        rho(n, m) = std::conj(rho(m, n));
        const std::vector<ModeCoupling> modes{{1.0, 0.1 * kappa_of(static_cast<std::size_t>(m)), 0.1 * kappa_of(static_cast<std::size_t>(n))},
                                              {2.5, {0.0, 0.05 * m}, {0.0, 0.05 * n}}};
        table(m, n) = s_mn(modes, 1.0, 3.0);
        table(n, m) = std::conj(table(m, n));
      }
    }
    const auto out = evolve_reduced_matrix(rho, energies, table, 1e-6);
    d.flag("evolve_hermitian", (out - out.adjoint()).cwiseAbs().maxCoeff() == 0.0);
    d.flag("evolve_trace", out.trace() == rho.trace());
    // Scaling laws.
    PhysicalConfig v2 = cfg, n8 = cfg;
    v2.v_s *= 2;
    n8.N *= 8;
    d.check("tau_X(2v)/tau_X", rate_constants(v2).tau_X / r.tau_X, 4.0, 1e-12);
    d.check("tau_X(8N)/tau_X", rate_constants(n8).tau_X / r.tau_X, 0.5, 1e-12);
    d.check("tau_X(2nu)/tau_X", tau_X_from_nu_hat(2 * r.nu_hat0, cfg.v_s, cfg.N) / r.tau_X, 0.25, 1e-12);
    report.line(9, d.ok, d.os.str(), since(t0));
  }

  {  // 10: theory curve shape, anchor and residual round trip
    const auto t0 = clock_type::now();
    Detail d;
    const std::vector<double> nus{10.0, 20.0, 40.0, 50.4, 80.0};
    const auto curve = theory_curve(nus, cfg.v_s, cfg.N);
    double worst = 0.0;
    for (std::size_t i = 0; i < nus.size(); ++i)
      worst = std::max(worst, rel(curve[i] * nus[i] * nus[i], curve[0] * nus[0] * nus[0]));
    d.flag("inverse_square", worst <= 1e-12);
    d.os << "shape_dev=" << worst << " ";
    d.check("anchor_us", theory_curve({50.4}, 4570.0, 4.7e22)[0] * 1e6, 141.0, 0.01);
    std::ostringstream csv;
    csv << kExperimentHeader << '\n';
    std::vector<double> noise;
    for (std::size_t i = 0; i < nus.size(); ++i) {
      noise.push_back(0.05 * std::sin(1.7 * static_cast<double>(i) + 0.3));
      csv << fmt17(nus[i]) << ',' << fmt17(curve[i] * (1 + noise[i]) * 1e6) << '\n';
    }
    const auto rows = compare_experiment(parse_experiment_csv(csv.str()), cfg.v_s, cfg.N);
    double rt = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) rt = std::max(rt, std::abs(rows[i].residual / rows[i].tau_theory - noise[i]));
    d.flag("round_trip", rt <= 1e-12);
    d.os << "round_trip_dev=" << rt;
    report.line(10, d.ok, d.os.str(), since(t0));
  }

  std::printf("%d criterion(s) failed\n", report.failed);
  return report.failed == 0 ? 0 : 1;
}

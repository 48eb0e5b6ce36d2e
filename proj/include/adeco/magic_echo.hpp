#pragma once

#include <cmath>
#include <complex>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "adeco/config.hpp"
#include "adeco/deco_core.hpp"
#include "adeco/errors.hpp"
#include "adeco/pair_level.hpp"
#include "adeco/pair_phonon.hpp"

namespace adeco {

/// Forward evolution for t_F, then evolution with the coupling scaled by f_B for t_B.
struct ReversalSchedule {
  double t_F = 0.0;
  double t_B = 0.0;
  double f_B = -0.5;

  [[nodiscard]] double total() const { return t_F + t_B; }
};

/// Ideal magic echo: f_B = -1/2 and t_B = 2 t_F.
[[nodiscard]] inline ReversalSchedule magic_echo_schedule(double t_total) {
  return {t_total / 3.0, 2.0 * t_total / 3.0, -0.5};
}

struct ReversalTrig {
  double C = 0.0;  // replaces 1 - cos(w t)
  double S = 0.0;  // replaces sin(w t)
};

[[nodiscard]] inline ReversalTrig reversal_trig(double omega, const ReversalSchedule& s) {
  if (!(omega > 0.0)) throw DomainError("reversal_trig: omega must be positive");
  const double f = s.f_B;
  const double xf = omega * s.t_F;
  const double xb = omega * s.t_B;
  const double xt = omega * (s.t_F + s.t_B);
  ReversalTrig r;
  r.C = (1.0 - f) * detail::one_minus_cos(xf) + f * (f - 1.0) * detail::one_minus_cos(xb) +
        f * detail::one_minus_cos(xt);
  r.S = (1.0 - f) * std::sin(xf) + f * (f - 1.0) * std::sin(xb) + f * std::sin(xt);
  return r;
}

/// Magic-echo specialisation written in terms of the total time t = 3 t_F.
[[nodiscard]] inline ReversalTrig magic_echo_trig(double omega, double t) {
  const double x = omega * t;
  return {1.5 * (1.0 - std::cos(x / 3.0)) + 0.75 * (1.0 - std::cos(2.0 * x / 3.0)) -
              0.5 * (1.0 - std::cos(x)),
          1.5 * std::sin(x / 3.0) + 0.75 * std::sin(2.0 * x / 3.0) - 0.5 * std::sin(x)};
}

/// Per-mode exponent after the reversal schedule.
[[nodiscard]] inline DecoherenceExponent reversal_exponent_k(cd lambda_m, cd lambda_n, double omega,
                                                             double beta, const ReversalSchedule& s) {
  detail::check_mode(omega, beta, 0.0);
  if (!(s.t_F >= 0.0) || !(s.t_B >= 0.0)) throw DomainError("reversal_exponent_k: negative time");
  const auto trig = reversal_trig(omega, s);
  DecoherenceExponent e;
  e.gamma = std::norm(lambda_m - lambda_n) / (omega * omega) * detail::coth(0.5 * beta * omega) * trig.C;
  e.upsilon = upsilon_from_trig(lambda_m, lambda_n, omega, trig.S,
                                omega * (s.t_F + s.f_B * s.f_B * s.t_B), trig.C);
  return e;
}

/// Coefficient of the linear term that no reversal removes.
[[nodiscard]] inline double irreversible_linear_coefficient(const ReversalSchedule& s) {
  return s.t_F + s.f_B * s.f_B * s.t_B;
}

/// Phase step for the echo sequence: weights 3/2, 3/4, -1/2 on horizons n v_s t / 3.
[[nodiscard]] inline double phi_reversal(double x, double t, double v_s) {
  constexpr double weights[3] = {1.5, 0.75, -0.5};
  double s = 0.0;
  for (int n = 1; n <= 3; ++n) s += weights[n - 1] * phi_step(x, t, n * v_s / 3.0);
  return s;
}

/// Continuum kernels of the echo sequence at total time t.
[[nodiscard]] inline KernelPair me_closed_kernels(const PhysicalConfig& cfg, double t) {
  auto k = closed_kernels(cfg, 0.5 * t);
  k.in_window = t >= 7.0 * cfg.a / (4.0 * cfg.v_s) * 10.0;
  return k;
}

[[nodiscard]] inline double me_zeta_closed(const PhysicalConfig& cfg, double x, double t) {
  if (!(t >= 0.0)) throw DomainError("me_zeta_closed: negative t");
  return zeta_scale(cfg) *
         (phi_reversal(x, t, cfg.v_s) / two_pi - cfg.v_s / cfg.a * 0.5 * t * sinc_weight(x, cfg.a));
}

/// Largest |phi_reversal| / pi, which bounds the width of the echo X' sum.
inline constexpr double kReversalPhiMax = 1.75;

/// Reduced pair matrix at total time t of the ideal echo sequence.
[[nodiscard]] inline ReducedPairMatrix me_sigma(const PhysicalConfig& cfg,
                                                const ReducedPairMatrix& sigma0, double t,
                                                EvolutionPath path = EvolutionPath::approximate) {
  if (!(t >= 0.0)) throw DomainError("me_sigma: negative t");
  const auto r = rate_constants(cfg);
  const double tau_me = 2.0 * r.tau_X;
  ReducedPairMatrix out;
  for (std::size_t m = 0; m < kPairLevels; ++m) {
    for (std::size_t n = 0; n < kPairLevels; ++n) {
      const int km = kappa_of(m);
      const int kn = kappa_of(n);
      const int dk = km - kn;
      const double envelope = std::isinf(tau_me) ? 1.0 : std::exp(-std::pow(dk * t / tau_me, 2));
      std::complex<double> f = envelope;
      if (path == EvolutionPath::exact) {
        const double half = 0.5 * t;
        f *= std::exp(std::complex<double>(-dk * dk * half / r.tau_gamma,
                                           two_pi * r.nuD * (km * km - kn * kn) * half)) *
             prime_factor(r, cfg, dk, kReversalPhiMax * r.sigma_Xprime);
      }
      out(m, n) = sigma0(m, n) * f;
    }
  }
  return out;
}

/// Echo decay time of the normalized signal, 2 tau_X / 3.
[[nodiscard]] inline double me_signal_decay_time(const PhysicalConfig& cfg) {
  return 2.0 * rate_constants(cfg).tau_X / 3.0;
}

[[nodiscard]] inline double me_amplitude(const PhysicalConfig& cfg, double t_total) {
  if (!(t_total >= 0.0)) throw DomainError("me_amplitude: negative t");
  const double tau = me_signal_decay_time(cfg);
  return std::isinf(tau) ? 1.0 : std::exp(-std::pow(t_total / tau, 2));
}

/// Sum of |<m|I_x|n>|^2 over the basis.
[[nodiscard]] inline double ix_weight() { return ix_operator().cwiseAbs2().sum(); }

/// <I_x> of N pairs after the echo sequence of total length t.
[[nodiscard]] inline double ix_expectation(const PhysicalConfig& cfg, double t, double N,
                                           const FundamentalConstants& c = codata2018) {
  const double tau_me = 2.0 * rate_constants(cfg).tau_X;
  const double decay = std::isinf(tau_me) ? 1.0 : std::exp(-std::pow(3.0 * t / tau_me, 2));
  return -(c.hbar * cfg.omega0_larmor * N / (c.k_B * cfg.T)) * ix_weight() * decay;
}

/// Same quantity as N Tr[I_x sigma(t)] with sigma from me_sigma.
[[nodiscard]] inline double ix_expectation_from_trace(const PhysicalConfig& cfg, double t, double N,
                                                      EvolutionPath path = EvolutionPath::approximate) {
  const auto s = me_sigma(cfg, initial_after_pulse(cfg.omega0_larmor, cfg.T), t, path);
  return N * (ix_operator() * s).trace().real();
}

/// Echo signal decay time for each dipolar frequency (kHz), in seconds.
[[nodiscard]] inline std::vector<double> theory_curve(const std::vector<double>& nu_hat_khz, double v_s,
                                                      double N) {
  std::vector<double> out;
  out.reserve(nu_hat_khz.size());
  for (double nu : nu_hat_khz) {
    if (!(nu > 0.0)) throw DomainError("theory_curve: frequencies must be positive");
    out.push_back(2.0 / 3.0 * tau_X_from_nu_hat(nu * 1e3, v_s, N));
  }
  return out;
}

struct ExperimentRecord {
  double nu_hat_khz = 0.0;
  double tau_exp = 0.0;  // s
};

inline constexpr std::string_view kExperimentHeader = "nu_hat_khz,tau_exp_us";

/// Parses the experiment CSV; errors carry the 1-based line number.
[[nodiscard]] inline std::vector<ExperimentRecord> parse_experiment_csv(std::string_view text) {
  std::vector<ExperimentRecord> out;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  bool header_seen = false;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const auto line = detail::trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++lineno;
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kExperimentHeader)
        throw CsvError(lineno, "expected header '" + std::string(kExperimentHeader) + "'");
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos)
      throw CsvError(lineno, "expected two comma-separated fields");
    const auto nu = detail::to_double(detail::trim(line.substr(0, comma)));
    const auto tau = detail::to_double(detail::trim(line.substr(comma + 1)));
    if (!nu || !tau) throw CsvError(lineno, "non-numeric field");
    if (!(*nu > 0.0) || !(*tau > 0.0) || !std::isfinite(*nu) || !std::isfinite(*tau))
      throw CsvError(lineno, "fields must be positive");
    out.push_back({*nu, *tau * 1e-6});
  }
  if (!header_seen) throw CsvError("empty experiment file");
  if (out.empty()) throw CsvError("no records after header");
  return out;
}

struct ComparisonRow {
  double nu_hat_khz = 0.0;
  double tau_exp = 0.0;     // s
  double tau_theory = 0.0;  // s
  double residual = 0.0;    // s, measured minus theory
  double tau_low = 0.0;     // s, envelope at 2800 m/s and N = 8e21
  double tau_high = 0.0;    // s, envelope at 5500 m/s and N = 8e22
};

struct EnvelopeParams {
  double v_s;
  double N;
};

inline constexpr EnvelopeParams kLowEnvelope{2800.0, 8e21};
inline constexpr EnvelopeParams kHighEnvelope{5500.0, 8e22};

[[nodiscard]] inline std::vector<ComparisonRow> compare_experiment(
    const std::vector<ExperimentRecord>& records, double v_s, double N) {
  if (records.empty()) throw DomainError("compare_experiment: no records");
  std::vector<ComparisonRow> rows;
  rows.reserve(records.size());
  for (const auto& r : records) {
    ComparisonRow row;
    row.nu_hat_khz = r.nu_hat_khz;
    row.tau_exp = r.tau_exp;
    row.tau_theory = theory_curve({r.nu_hat_khz}, v_s, N).front();
    row.residual = r.tau_exp - row.tau_theory;
    row.tau_low = theory_curve({r.nu_hat_khz}, kLowEnvelope.v_s, kLowEnvelope.N).front();
    row.tau_high = theory_curve({r.nu_hat_khz}, kHighEnvelope.v_s, kHighEnvelope.N).front();
    rows.push_back(row);
  }
  return rows;
}

}  // namespace adeco

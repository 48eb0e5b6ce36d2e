#pragma once

#include <cmath>
#include <complex>
#include <limits>

#include "adeco/config.hpp"
#include "adeco/constants.hpp"
#include "adeco/deco_core.hpp"
#include "adeco/errors.hpp"
#include "adeco/pair_level.hpp"

namespace adeco {

namespace detail {

// Angular factor 1 - 3 cos^2(theta), snapped to zero at the magic angle.
inline double dipolar_angle_factor(double theta) {
  const double c = std::cos(theta);
  const double f = 1.0 - 3.0 * c * c;
  return std::abs(f) < 1e-12 ? 0.0 : f;
}

inline double sgn(double x) { return static_cast<double>((x > 0.0) - (x < 0.0)); }

}  // namespace detail

/// Secular dipolar coupling of a proton pair, rad/s (signed).
[[nodiscard]] inline double dipolar_coupling(double d, double theta,
                                             const FundamentalConstants& c = codata2018) {
  if (!(d > 0.0)) throw DomainError("dipolar_coupling: d must be positive");
  return c.mu_0 * c.gamma_p * c.gamma_p * c.hbar / (8.0 * pi) * detail::dipolar_angle_factor(theta) /
         (d * d * d);
}

/// Level energy Omega0 kappa / 2, rad/s.
[[nodiscard]] inline double level_energy(const PhysicalConfig& cfg, int kappa) {
  return 0.5 * dipolar_coupling(cfg.d, cfg.theta) * kappa;
}

/// Local eigenvalue of the spin-lattice coupling operator, rad/s per meter of displacement.
[[nodiscard]] inline double local_eigenvalue(const PhysicalConfig& cfg, int kappa) {
  return -1.5 * dipolar_coupling(cfg.d, cfg.theta) / cfg.d * kappa;
}

enum class CouplingForm {
  exact,     // sin(k d / 2)
  small_kd,  // k d / 2
};

/// Acoustic-branch coupling amplitude g_k in meters. Returns 0 at k = 0.
[[nodiscard]] inline std::complex<double> acoustic_coupling(double k, const PhysicalConfig& cfg,
                                                            CouplingForm form = CouplingForm::exact,
                                                            const FundamentalConstants& c = codata2018) {
  const double k_max = pi / cfg.a;
  if (std::abs(k) > k_max * (1.0 + 1e-12)) throw DomainError("acoustic_coupling: |k| beyond pi/a");
  if (k == 0.0) return {0.0, 0.0};
  constexpr double branches = 2.0;
  const double omega = cfg.v_s * std::abs(k);
  const double u = std::sqrt(c.hbar / (2.0 * omega * c.m_p * cfg.N * branches));
  const double s = form == CouplingForm::exact ? std::sin(0.5 * k * cfg.d) : 0.5 * k * cfg.d;
  return {0.0, -2.0 * u * s};
}

struct OpticalAcousticRatio {
  double ratio = 0.0;  // optical over acoustic contribution per mode
  bool negligible = false;
};

/// Compares a dispersionless optical branch at omega_o against the acoustic mode at k.
[[nodiscard]] inline OpticalAcousticRatio optical_acoustic_ratio(double k, double omega_o,
                                                                 const PhysicalConfig& cfg) {
  if (!(omega_o > 0.0)) throw DomainError("optical_acoustic_ratio: omega_o must be positive");
  if (k == 0.0) throw DomainError("optical_acoustic_ratio: k must be nonzero");
  if (std::isinf(omega_o)) return {0.0, true};
  const double omega_a = 2.0 * cfg.v_s / cfg.a;
  const double da = cfg.d / cfg.a;
  const double wr = omega_o / omega_a;
  const double ka = std::abs(k) * cfg.a;
  const double bound = 2.0 * da * da * wr * wr * wr;
  return {ka / bound, ka < bound};
}

struct KernelPair {
  double gamma = 0.0;  // m^2 s^2
  double epsilon = 0.0;  // m^2 s^2
  bool in_window = true;  // t >= 10 a / (2 v_s)
};

/// Continuum-limit kernels, linear in t.
[[nodiscard]] inline KernelPair closed_kernels(const PhysicalConfig& cfg, double t,
                                               const FundamentalConstants& c = codata2018) {
  if (!(t >= 0.0)) throw DomainError("closed_kernels: negative t");
  const double d2 = cfg.d * cfg.d;
  KernelPair k;
  k.gamma = d2 * c.k_B * cfg.T * cfg.a / (4.0 * std::pow(cfg.v_s, 3) * c.m_p) * t;
  k.epsilon = -d2 * c.hbar / (4.0 * cfg.v_s * cfg.v_s * c.m_p) * t;
  k.in_window = t >= 10.0 * cfg.a / (2.0 * cfg.v_s);
  return k;
}

/// Causal step: pi inside the sound horizon, pi/2 on it, 0 outside.
[[nodiscard]] inline double phi_step(double x, double t, double v_s) {
  if (!(t >= 0.0)) throw DomainError("phi_step: negative t");
  return 0.5 * pi * (detail::sgn(v_s * t + x) + detail::sgn(v_s * t - x));
}

/// sin(pi x / a) / (pi x / a); exact zeros at nonzero integer multiples of a.
[[nodiscard]] inline double sinc_weight(double x, double a) {
  if (!(a > 0.0)) throw DomainError("sinc_weight: a must be positive");
  if (x == 0.0) return 1.0;
  const double q = x / a;
  if (q == std::nearbyint(q)) return 0.0;
  const double arg = pi * q;
  return std::sin(arg) / arg;
}

/// d^2 hbar a / (2 v_s^3 m_p), the prefactor of the pair-separation kernel.
[[nodiscard]] inline double zeta_scale(const PhysicalConfig& cfg,
                                       const FundamentalConstants& c = codata2018) {
  return cfg.d * cfg.d * c.hbar * cfg.a / (2.0 * std::pow(cfg.v_s, 3) * c.m_p);
}

[[nodiscard]] inline double zeta_closed(const PhysicalConfig& cfg, double x, double t,
                                        const FundamentalConstants& c = codata2018) {
  if (!(t >= 0.0)) throw DomainError("zeta_closed: negative t");
  return zeta_scale(cfg, c) *
         (phi_step(x, t, cfg.v_s) / two_pi - cfg.v_s / cfg.a * t * sinc_weight(x, cfg.a));
}

struct RateConstants {
  double Omega0 = 0.0;        // rad/s
  double nu0 = 0.0;           // Hz, signed
  double nu_hat0 = 0.0;       // Hz, 3 |nu0|
  double nuD = 0.0;           // Hz
  double tau_gamma = 0.0;     // s
  double tau_gamma_min = 0.0; // s
  double sigma_X = 0.0;
  double sigma_Xprime = 0.0;
  double tau_X = 0.0;         // s, +inf at the magic angle
  double tau_X_from_nu_hat = 0.0;  // same quantity via the nu_hat0 form
};

/// sqrt(3 n / 2): width of the eigenvalue-sum distribution over n pairs.
[[nodiscard]] inline double eigen_sum_width(double n) { return std::sqrt(1.5 * n); }

/// Decoherence time from the dipolar frequency nu_hat (Hz), sound speed and sample size.
[[nodiscard]] inline double tau_X_from_nu_hat(double nu_hat, double v_s, double N,
                                              const FundamentalConstants& c = codata2018) {
  const double sigma = eigen_sum_width(std::pow(N, 2.0 / 3.0));
  const double rate = std::sqrt(2.0) * pi * pi * nu_hat * nu_hat * c.hbar * sigma / (v_s * v_s * c.m_p);
  return rate == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / rate;
}

[[nodiscard]] inline RateConstants rate_constants(const PhysicalConfig& cfg,
                                                  const FundamentalConstants& c = codata2018) {
  RateConstants r;
  const double w0 = dipolar_coupling(cfg.d, cfg.theta, c);
  const double w02 = w0 * w0;
  const double v2 = cfg.v_s * cfg.v_s;
  r.Omega0 = w0;
  r.nu0 = -w0 / (4.0 * pi);
  r.nu_hat0 = 3.0 * std::abs(r.nu0);
  r.nuD = 9.0 * w02 * c.hbar / (32.0 * pi * v2 * c.m_p);
  const double inv_tau_gamma = 9.0 * w02 * c.k_B * cfg.T * cfg.a / (16.0 * v2 * cfg.v_s * c.m_p);
  r.tau_gamma = inv_tau_gamma == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / inv_tau_gamma;
  r.tau_gamma_min = r.tau_gamma / 9.0;
  r.sigma_X = eigen_sum_width(std::pow(cfg.N, 2.0 / 3.0));
  r.sigma_Xprime = eigen_sum_width(cfg.N);
  const double inv_tau_X = 2.0 * std::sqrt(2.0) * pi * r.nuD * r.sigma_X;
  r.tau_X = inv_tau_X == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / inv_tau_X;
  r.tau_X_from_nu_hat = tau_X_from_nu_hat(r.nu_hat0, cfg.v_s, cfg.N, c);
  return r;
}

/// Deviation density matrix right after a saturating pulse: -(hbar w0 / k_B T) I_x.
[[nodiscard]] inline ReducedPairMatrix initial_after_pulse(double omega0_larmor, double T,
                                                           const FundamentalConstants& c = codata2018) {
  if (!(T > 0.0)) throw DomainError("initial_after_pulse: T must be positive");
  return -(c.hbar * omega0_larmor / (c.k_B * T)) * ix_operator();
}

/// Average of exp(-i c X) over a zero-mean Gaussian X of the given width.
[[nodiscard]] inline double gaussian_phase_average(double phase_per_unit, double width) {
  const double s = phase_per_unit * width;
  return std::exp(-0.5 * s * s);
}

enum class EvolutionPath {
  approximate,  // Gaussian envelope only
  exact,        // adds thermal decay, the nuD phase and the X' average
};

/// Smallest value of the X' average that the approximate path tolerates.
inline constexpr double kMinPrimeFactor = 1.0 - 1e-6;

/// Average over X' for a coherence with kappa difference dkappa.
[[nodiscard]] inline double prime_factor(const RateConstants& r, const PhysicalConfig& cfg,
                                         int dkappa, double width) {
  return gaussian_phase_average(two_pi * r.nuD * dkappa * cfg.a / cfg.v_s, width);
}

/// Coherence factor for a single partner configuration with eigenvalue sums X and X'.
[[nodiscard]] inline std::complex<double> partner_configuration_factor(
    const PhysicalConfig& cfg, const RateConstants& r, int kappa_m, int kappa_n, double X,
    double Xprime, double t) {
  const int dk = kappa_m - kappa_n;
  const double decay = -dk * dk * t / r.tau_gamma;
  const double phase = two_pi * r.nu0 * dk * t +
                       two_pi * r.nuD * (kappa_m * kappa_m - kappa_n * kappa_n) * t -
                       two_pi * r.nuD * dk * cfg.a / cfg.v_s * Xprime +
                       2.0 * two_pi * r.nuD * dk * t * X;
  return std::exp(std::complex<double>(decay, phase));
}

/// Condensed kernels of the representative pair for partner sums X and X',
/// using the continuum closed forms.
[[nodiscard]] inline CondensedKernels pair_condensed_kernels(const PhysicalConfig& cfg, double t,
                                                             double X, double Xprime) {
  const auto k = closed_kernels(cfg, t);
  CondensedKernels out;
  out.gamma_A = k.gamma;
  out.epsilon_A = k.epsilon;
  const double unit_lambda = local_eigenvalue(cfg, 1);
  out.chi_A = unit_lambda * zeta_scale(cfg) * (0.5 * Xprime - cfg.v_s / cfg.a * t * X);
  out.coupling_unit = "m";
  return out;
}

/// Reduced pair matrix under free evolution.
[[nodiscard]] inline ReducedPairMatrix free_sigma(const PhysicalConfig& cfg,
                                                  const ReducedPairMatrix& sigma0, double t,
                                                  EvolutionPath path = EvolutionPath::approximate) {
  if (!(t >= 0.0)) throw DomainError("free_sigma: negative t");
  const auto r = rate_constants(cfg);
  if (path == EvolutionPath::approximate) {
    const double g_min = prime_factor(r, cfg, 3, r.sigma_Xprime);
    if (g_min < kMinPrimeFactor)
      throw DomainError("free_sigma: X' average below 1 - 1e-6, use the exact path");
  }
  ReducedPairMatrix out;
  for (std::size_t m = 0; m < kPairLevels; ++m) {
    for (std::size_t n = 0; n < kPairLevels; ++n) {
      const int km = kappa_of(m);
      const int kn = kappa_of(n);
      const int dk = km - kn;
      if (dk == 0 && path == EvolutionPath::approximate) {
        out(m, n) = sigma0(m, n);
        continue;
      }
      const double envelope =
          std::isinf(r.tau_X) ? 1.0 : std::exp(-std::pow(dk * t / r.tau_X, 2));
      std::complex<double> f;
      if (path == EvolutionPath::approximate) {
        f = std::exp(std::complex<double>(0.0, two_pi * r.nu0 * dk * t)) * envelope;
      } else {
        f = partner_configuration_factor(cfg, r, km, kn, 0.0, 0.0, t) * envelope *
            prime_factor(r, cfg, dk, r.sigma_Xprime);
      }
      out(m, n) = sigma0(m, n) * f;
    }
  }
  return out;
}

struct DiscreteKernels {
  double gamma = 0.0;
  double epsilon = 0.0;
  double zeta = 0.0;
  bool in_window = true;  // a / v_s << t << N1 a / v_s, checked with a factor of 10
};

/// Explicit sums over k_q = 2 pi q / (N1 a), q = +-1 .. +-N1/2, each mode carrying
/// weight N / N1 so that the sum tends to the continuum integral.
[[nodiscard]] inline DiscreteKernels discrete_kernel_sums(const PhysicalConfig& cfg, double t,
                                                          double x,
                                                          CouplingForm form = CouplingForm::exact,
                                                          const FundamentalConstants& c = codata2018) {
  if (cfg.N1 < 2) throw DomainError("discrete_kernel_sums: N1 must be >= 2");
  if (!(t >= 0.0)) throw DomainError("discrete_kernel_sums: negative t");
  const double n1 = static_cast<double>(cfg.N1);
  const double dk = two_pi / (n1 * cfg.a);
  const double weight = cfg.N / n1;
  const double beta = c.beta(cfg.T);
  const std::int64_t q_max = cfg.N1 / 2;
  DiscreteKernels out;
  for (std::int64_t q = 1; q <= q_max; ++q) {
    const double k = dk * static_cast<double>(q);
    const double w = cfg.v_s * k;
    const double g2 = std::norm(acoustic_coupling(k, cfg, form, c));
    const double wt = w * t;
    const double s_half = std::sin(0.5 * wt);
    const double base = 2.0 * weight * g2 / (w * w);  // +k and -k contribute equally
    out.gamma += base * 2.0 * s_half * s_half * detail::coth(0.5 * beta * w);
    out.epsilon += base * (std::sin(wt) - wt);
    out.zeta += 2.0 * base * std::cos(k * x) * (std::sin(wt) - wt);
  }
  const double a_over_v = cfg.a / cfg.v_s;
  out.in_window = t >= 10.0 * a_over_v && t <= 0.1 * n1 * a_over_v;
  return out;
}

}  // namespace adeco

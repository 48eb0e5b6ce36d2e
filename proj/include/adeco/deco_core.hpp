#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "adeco/errors.hpp"

namespace adeco {

using cd = std::complex<double>;

/// Per-mode exponent pair: S = exp(-gamma) * exp(-i * upsilon).
struct DecoherenceExponent {
  double gamma = 0.0;
  cd upsilon{};

  [[nodiscard]] cd s() const { return std::exp(-gamma - cd{0.0, 1.0} * upsilon); }

  DecoherenceExponent& operator+=(const DecoherenceExponent& o) {
    gamma += o.gamma;
    upsilon += o.upsilon;
    return *this;
  }
};

namespace detail {

inline void check_mode(double omega, double beta, double t) {
  if (omega == 0.0) throw SingularModeError("mode with omega = 0 must be excluded");
  if (!(omega > 0.0)) throw DomainError("omega must be positive");
  if (!(beta > 0.0)) throw DomainError("beta must be positive");
  if (!(t >= 0.0)) throw DomainError("t must be non-negative");
}

inline double coth(double x) { return 1.0 / std::tanh(x); }

// 1 - cos(x) without cancellation near x = 0.
inline double one_minus_cos(double x) {
  const double s = std::sin(0.5 * x);
  return 2.0 * s * s;
}

}  // namespace detail

/// Upsilon shared by free and reversed evolution, given the trigonometric
/// combinations that replace sin(wt), wt and 1 - cos(wt).
[[nodiscard]] inline cd upsilon_from_trig(cd lambda_m, cd lambda_n, double omega, double sin_term,
                                          double linear_term, double one_minus_cos_term) {
  const double w2 = omega * omega;
  const double im_mn = std::imag(lambda_m * std::conj(lambda_n));
  const double sin_minus_lin = sin_term - linear_term;
  return (lambda_m - lambda_n) * std::conj(lambda_m + lambda_n) / w2 * sin_minus_lin -
         2.0 * im_mn / w2 * cd{one_minus_cos_term, sin_minus_lin};
}

/// Closed-form exponent of one bath mode for the coherence between states m and n.
/// lambda in rad/s, omega in rad/s, beta = hbar / (k_B T) in s, t in s.
[[nodiscard]] inline DecoherenceExponent decoherence_exponent_k(cd lambda_m, cd lambda_n,
                                                                double omega, double beta,
                                                                double t) {
  detail::check_mode(omega, beta, t);
  const double wt = omega * t;
  const double s_half = std::sin(0.5 * wt);
  DecoherenceExponent e;
  e.gamma = 2.0 * std::norm(lambda_m - lambda_n) / (omega * omega) * s_half * s_half *
            detail::coth(0.5 * beta * omega);
  e.upsilon = upsilon_from_trig(lambda_m, lambda_n, omega, std::sin(wt), wt, 2.0 * s_half * s_half);
  return e;
}

struct ModeCoupling {
  double omega = 0.0;
  cd lambda_m{};
  cd lambda_n{};
};

/// Multi-mode decoherence function, the product of per-mode factors.
[[nodiscard]] inline cd s_mn(const std::vector<ModeCoupling>& modes, double beta, double t) {
  DecoherenceExponent total;
  for (const auto& m : modes) total += decoherence_exponent_k(m.lambda_m, m.lambda_n, m.omega, beta, t);
  return total.s();
}

/// rho(t)_{mn} = rho(0)_{mn} exp(-i (E_m - E_n) t) S_{mn}(t).
template <typename Derived>
[[nodiscard]] Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic> evolve_reduced_matrix(
    const Eigen::MatrixBase<Derived>& rho0, const Eigen::VectorXd& energies,
    const Eigen::MatrixXcd& s_table, double t) {
  const auto n = rho0.rows();
  if (rho0.cols() != n || energies.size() != n || s_table.rows() != n || s_table.cols() != n)
    throw DimensionError("evolve_reduced_matrix: dimension mismatch");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(s_table(i, i) - 1.0) > 1e-12)
      throw DomainError("evolve_reduced_matrix: S table diagonal must be 1");
  }
  Eigen::MatrixXcd out(n, n);
  for (Eigen::Index m = 0; m < n; ++m) {
    out(m, m) = rho0(m, m);
    for (Eigen::Index k = 0; k < n; ++k) {
      if (k == m) continue;
      const cd phase = std::exp(cd{0.0, -(energies(m) - energies(k)) * t});
      out(m, k) = rho0(m, k) * phase * s_table(m, k);
    }
  }
  return out;
}

/// Kernels of one representative element A after tracing out the bath and
/// all other elements. Units: s^2 per (coupling unit)^2.
struct CondensedKernels {
  double gamma_A = 0.0;
  double epsilon_A = 0.0;
  std::map<std::size_t, double> zeta;
  double chi_A = 0.0;
  std::string coupling_unit = "m";
};

/// couplings: element id -> g per mode (aligned with omegas).
/// partner_lambda: element id -> local eigenvalue lambda_{m_A'} of that partner.
[[nodiscard]] inline CondensedKernels condensed_kernels(
    const std::map<std::size_t, std::vector<cd>>& couplings, std::size_t target,
    const std::vector<double>& omegas, const std::map<std::size_t, double>& partner_lambda,
    double beta, double t, std::string coupling_unit = "m") {
  const auto self = couplings.find(target);
  if (self == couplings.end()) throw DimensionError("condensed_kernels: target not in couplings");
  for (const auto& [id, g] : couplings)
    if (g.size() != omegas.size()) throw DimensionError("condensed_kernels: mode count mismatch");

  CondensedKernels k;
  k.coupling_unit = std::move(coupling_unit);
  for (const auto& [id, g] : couplings)
    if (id != target) k.zeta[id] = 0.0;

  const auto& gA = self->second;
  for (std::size_t q = 0; q < omegas.size(); ++q) {
    const double w = omegas[q];
    detail::check_mode(w, beta, t);
    const double wt = w * t;
    const double w2 = w * w;
    const double s_half = std::sin(0.5 * wt);
    const double sin_lin = std::sin(wt) - wt;
    const double omc = 2.0 * s_half * s_half;
    const double g2 = std::norm(gA[q]);
    k.gamma_A += 2.0 * g2 / w2 * s_half * s_half * detail::coth(0.5 * beta * w);
    k.epsilon_A += g2 / w2 * sin_lin;
    for (auto& [id, z] : k.zeta) {
      const cd p = gA[q] * std::conj(couplings.at(id)[q]);
      z += 2.0 / w2 * (p.real() * sin_lin - p.imag() * omc);
    }
  }
  for (const auto& [id, z] : k.zeta) {
    const auto it = partner_lambda.find(id);
    if (it == partner_lambda.end())
      throw DimensionError("condensed_kernels: missing partner eigenvalue for element " +
                           std::to_string(id));
    k.chi_A += it->second * z;
  }
  return k;
}

/// Local eigenvalues of the representative element, in rad/s per coupling unit.
struct LocalEigenvalues {
  double m = 0.0;
  double n = 0.0;
  std::string coupling_unit = "m";
};

/// Condensed reduced-matrix element of the representative element.
[[nodiscard]] inline cd condensed_sigma_element(cd rho0, double E_m, double E_n,
                                                const LocalEigenvalues& lambda,
                                                const CondensedKernels& kernels, double t) {
  if (lambda.coupling_unit != kernels.coupling_unit)
    throw UnitError("eigenvalues per '" + lambda.coupling_unit + "' do not match kernels in '" +
                    kernels.coupling_unit + "'^2 s^2");
  const double dl = lambda.m - lambda.n;
  const double sl = lambda.m * lambda.m - lambda.n * lambda.n;
  const double phase = (E_m - E_n) * t + sl * kernels.epsilon_A + dl * kernels.chi_A;
  return rho0 * std::exp(cd{-dl * dl * kernels.gamma_A, -phase});
}

}  // namespace adeco

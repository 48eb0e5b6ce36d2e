#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "adeco/errors.hpp"

namespace adeco {

/// One bosonic mode truncated to levels 0..n_max.
struct TruncatedMode {
  int n_max = 0;
  double omega = 0.0;
  Eigen::MatrixXcd b;
  Eigen::MatrixXcd bdag;
  Eigen::MatrixXcd number;

  TruncatedMode(int n_max_, double omega_) : n_max(n_max_), omega(omega_) {
    if (n_max < 1) throw DomainError("TruncatedMode: n_max must be >= 1");
    if (!(omega > 0.0)) throw DomainError("TruncatedMode: omega must be positive");
    const int dim = n_max + 1;
    b = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) b(n - 1, n) = std::sqrt(static_cast<double>(n));
    bdag = b.adjoint();
    number = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 0; n < dim; ++n) number(n, n) = static_cast<double>(n);
  }

  [[nodiscard]] int dim() const { return n_max + 1; }

  /// omega b^dag b + f (lambda^* b + lambda b^dag)
  [[nodiscard]] Eigen::MatrixXcd generator(std::complex<double> lambda, double f = 1.0) const {
    return omega * number + f * (std::conj(lambda) * b + lambda * bdag);
  }
};

/// Diagonal of the normalized thermal state exp(-beta omega n) / Z.
[[nodiscard]] inline Eigen::VectorXd thermal_weights(const TruncatedMode& mode, double beta) {
  const double x = beta * mode.omega;
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("thermal_state: beta*omega must be finite and > 0");
  Eigen::VectorXd w(mode.dim());
  for (int n = 0; n < mode.dim(); ++n) w(n) = std::exp(-x * n);
  const double z = w.sum();
  if (!(z > 0.0) || !std::isfinite(z)) throw DomainError("thermal_state: partition function underflow");
  w /= z;
  return w;
}

[[nodiscard]] inline Eigen::MatrixXcd thermal_state(const TruncatedMode& mode, double beta) {
  return thermal_weights(mode, beta).cast<std::complex<double>>().asDiagonal();
}

/// Mean occupation of the bosonic mode, 1 / (exp(beta omega) - 1).
[[nodiscard]] inline double bose_occupation(double beta_omega) { return 1.0 / std::expm1(beta_omega); }

/// Spectral decomposition of a Hermitian generator, used to build exp(-i H t).
struct HermitianPropagator {
  Eigen::VectorXd energies;
  Eigen::MatrixXcd vectors;

  explicit HermitianPropagator(const Eigen::MatrixXcd& h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    if (es.info() != Eigen::Success) throw Error("eigendecomposition failed");
    energies = es.eigenvalues();
    vectors = es.eigenvectors();
  }

  /// exp(-i H t) X
  [[nodiscard]] Eigen::MatrixXcd apply(double t, const Eigen::MatrixXcd& x) const {
    Eigen::MatrixXcd y = vectors.adjoint() * x;
    for (Eigen::Index k = 0; k < energies.size(); ++k)
      y.row(k) *= std::exp(std::complex<double>(0.0, -energies(k) * t));
    return vectors * y;
  }

  /// First `cols` columns of exp(-i H t).
  [[nodiscard]] Eigen::MatrixXcd columns(double t, Eigen::Index cols) const {
    Eigen::MatrixXcd y = vectors.adjoint().leftCols(cols);
    for (Eigen::Index k = 0; k < energies.size(); ++k)
      y.row(k) *= std::exp(std::complex<double>(0.0, -energies(k) * t));
    return vectors * y;
  }

  [[nodiscard]] Eigen::MatrixXcd unitary(double t) const {
    return apply(t, Eigen::MatrixXcd::Identity(energies.size(), energies.size()));
  }
};

namespace detail {

// Each column j of a unitary product contributes at most theta_j to the trace, so a
// tail of total weight below 1e-17 is dropped.
inline Eigen::Index occupied_columns(const Eigen::VectorXd& theta) {
  Eigen::Index j = theta.size();
  double tail = 0.0;
  while (j > 1 && tail + theta(j - 1) < 1e-17) tail += theta(--j);
  return j;
}

// Tr[A Theta B^dag] from the first `cols` columns of A and B.
inline std::complex<double> thermal_trace(const Eigen::MatrixXcd& a, const Eigen::VectorXd& theta,
                                          const Eigen::MatrixXcd& b) {
  std::complex<double> s{};
  for (Eigen::Index j = 0; j < a.cols(); ++j) s += theta(j) * b.col(j).dot(a.col(j));
  return s;
}

}  // namespace detail

/// Tr[exp(-i(M+J_m)t) Theta exp(+i(M+J_n)t)] on the truncated space.
[[nodiscard]] inline std::complex<double> numeric_s_free(std::complex<double> lambda_m,
                                                         std::complex<double> lambda_n,
                                                         const TruncatedMode& mode, double beta,
                                                         double t) {
  if (!(t >= 0.0)) throw DomainError("numeric_s_free: t must be non-negative");
  const Eigen::VectorXd theta = thermal_weights(mode, beta);
  const Eigen::Index cols = detail::occupied_columns(theta);
  const HermitianPropagator pm(mode.generator(lambda_m));
  const HermitianPropagator pn(mode.generator(lambda_n));
  return detail::thermal_trace(pm.columns(t, cols), theta, pn.columns(t, cols));
}

/// Five-factor trace for forward evolution over t_F followed by evolution with
/// the coupling scaled by f_B over t_B.
[[nodiscard]] inline std::complex<double> numeric_s_reversal(std::complex<double> lambda_m,
                                                             std::complex<double> lambda_n,
                                                             const TruncatedMode& mode, double beta,
                                                             double t_F, double t_B, double f_B) {
  if (!(t_F >= 0.0) || !(t_B >= 0.0)) throw DomainError("numeric_s_reversal: times must be non-negative");
  const Eigen::VectorXd theta = thermal_weights(mode, beta);
  const Eigen::Index cols = detail::occupied_columns(theta);
  auto left = [&](std::complex<double> lambda) {
    const HermitianPropagator forward(mode.generator(lambda));
    const HermitianPropagator backward(mode.generator(lambda, f_B));
    return backward.apply(t_B, forward.columns(t_F, cols));
  };
  return detail::thermal_trace(left(lambda_m), theta, left(lambda_n));
}

/// Max-norm of (M + fJ) - (omega a^dag a - f^2 |lambda|^2 / omega), a = b + f lambda / omega,
/// over the block that excludes the last row and column.
[[nodiscard]] inline double displaced_identity_residual(std::complex<double> lambda,
                                                        const TruncatedMode& mode, double f) {
  const int dim = mode.dim();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim, dim);
  const Eigen::MatrixXcd a = mode.b + (f * lambda / mode.omega) * id;
  const Eigen::MatrixXcd displaced_number = a.adjoint() * a;
  const Eigen::MatrixXcd lhs = mode.generator(lambda, f);
  const Eigen::MatrixXcd rhs =
      mode.omega * displaced_number - (f * f * std::norm(lambda) / mode.omega) * id;
  return (lhs - rhs).topLeftCorner(dim - 1, dim - 1).cwiseAbs().maxCoeff();
}

struct Converged {
  std::complex<double> value;
  int n_used = 0;
};

/// Evaluates op(n) along the schedule and returns the later value of the first
/// successive pair that differs by less than tol.
[[nodiscard]] inline Converged converge(const std::function<std::complex<double>(int)>& op,
                                        const std::vector<int>& schedule, double tol) {
  if (schedule.empty()) throw DomainError("converge: empty schedule");
  std::complex<double> prev = op(schedule.front());
  std::complex<double> cur = prev;
  for (std::size_t i = 1; i < schedule.size(); ++i) {
    cur = op(schedule[i]);
    if (std::abs(cur - prev) < tol) return {cur, schedule[i]};
    if (i + 1 < schedule.size()) prev = cur;
  }
  throw ConvergenceError("cutoff schedule exhausted", prev, cur);
}

/// Doubling schedule starting at ceil(10 nbar + 4 max|lambda/omega|^2 + 20).
[[nodiscard]] inline std::vector<int> cutoff_schedule(double beta_omega, double max_lambda_over_omega,
                                                      int doublings = 3) {
  const double n0 = std::ceil(10.0 * bose_occupation(beta_omega) +
                              4.0 * max_lambda_over_omega * max_lambda_over_omega + 20.0);
  std::vector<int> s;
  int n = static_cast<int>(n0);
  for (int i = 0; i <= doublings; ++i, n *= 2) s.push_back(n);
  return s;
}

}  // namespace adeco

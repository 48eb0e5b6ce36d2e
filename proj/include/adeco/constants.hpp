#pragma once

#include <numbers>

namespace adeco {

/// CODATA 2018 recommended values, SI units.
struct FundamentalConstants {
  double hbar = 1.054571817e-34;      // J s
  double k_B = 1.380649e-23;          // J / K
  double mu_0 = 1.25663706212e-6;     // H / m
  double gamma_p = 2.6752218744e8;    // rad / (s T)
  double m_p = 1.67262192369e-27;     // kg

  /// hbar / (k_B T), in seconds, so that beta * omega is dimensionless.
  [[nodiscard]] constexpr double beta(double T) const { return hbar / (k_B * T); }
};

inline constexpr FundamentalConstants codata2018{};

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

}  // namespace adeco

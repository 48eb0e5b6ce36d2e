#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

#include <Eigen/Core>

namespace adeco {

/// Triplet-singlet basis of one spin pair, in matrix index order.
enum class PairLevel : std::size_t { TPlus = 0, TZero = 1, TMinus = 2, Singlet = 3 };

inline constexpr std::size_t kPairLevels = 4;

inline constexpr std::array<PairLevel, kPairLevels> all_levels{
    PairLevel::TPlus, PairLevel::TZero, PairLevel::TMinus, PairLevel::Singlet};

/// Eigenvalue of the secular dipolar tensor on each basis state.
[[nodiscard]] constexpr int kappa_of(PairLevel level) {
  switch (level) {
    case PairLevel::TPlus: return 1;
    case PairLevel::TZero: return -2;
    case PairLevel::TMinus: return 1;
    case PairLevel::Singlet: return 0;
  }
  return 0;
}

[[nodiscard]] constexpr int kappa_of(std::size_t index) {
  return kappa_of(static_cast<PairLevel>(index));
}

[[nodiscard]] constexpr const char* name_of(PairLevel level) {
  switch (level) {
    case PairLevel::TPlus: return "TPlus";
    case PairLevel::TZero: return "TZero";
    case PairLevel::TMinus: return "TMinus";
    case PairLevel::Singlet: return "Singlet";
  }
  return "?";
}

using ReducedPairMatrix = Eigen::Matrix<std::complex<double>, 4, 4>;

/// Total I_x of the pair in the triplet-singlet basis.
[[nodiscard]] inline ReducedPairMatrix ix_operator() {
  const double h = 1.0 / std::sqrt(2.0);
  ReducedPairMatrix m = ReducedPairMatrix::Zero();
  m(0, 1) = m(1, 0) = h;
  m(2, 1) = m(1, 2) = h;
  return m;
}

/// One phonon mode: wavenumber (1/m), angular frequency (rad/s), coupling (m).
struct ModeSpec {
  double k = 0.0;
  double omega = 0.0;
  std::complex<double> g{};
};

}  // namespace adeco

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <complex>
#include <ostream>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "adeco/errors.hpp"
#include "adeco/format.hpp"
#include "adeco/pair_level.hpp"

namespace adeco {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Multiplicity of each eigenvalue sum X = sum of kappa over N pairs.
class EigCountTable {
 public:
  explicit EigCountTable(int n) : n_(n), counts_(static_cast<std::size_t>(3 * n + 1)) {}

  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] int min_x() const { return -2 * n_; }
  [[nodiscard]] int max_x() const { return n_; }

  [[nodiscard]] const BigInt& count(int x) const {
    static const BigInt zero = 0;
    if (x < min_x() || x > max_x()) return zero;
    return counts_[static_cast<std::size_t>(x - min_x())];
  }
  BigInt& at(int x) {
    if (x < min_x() || x > max_x()) throw DomainError("EigCountTable: X out of support");
    return counts_[static_cast<std::size_t>(x - min_x())];
  }

  [[nodiscard]] BigInt total() const {
    BigInt s = 0;
    for (const auto& c : counts_) s += c;
    return s;
  }

  friend bool operator==(const EigCountTable&, const EigCountTable&) = default;

 private:
  int n_;
  std::vector<BigInt> counts_;
};

inline constexpr int kMaxExactPairs = 24;

/// N-fold convolution of the single-pair table {1: 2, 0: 1, -2: 1}.
[[nodiscard]] inline EigCountTable exact_counts(int n) {
  if (n < 1 || n > kMaxExactPairs) throw DomainError("exact_counts: N must be in [1, 24]");
  std::vector<BigInt> cur{1};  // index = X + 2 * (pairs so far)
  for (int step = 1; step <= n; ++step) {
    std::vector<BigInt> next(static_cast<std::size_t>(3 * step + 1));
    for (std::size_t i = 0; i < cur.size(); ++i) {
      if (cur[i] == 0) continue;
      // The lower bound moves down by 2 each step.
      for (std::size_t lvl = 0; lvl < kPairLevels; ++lvl)
        next[static_cast<std::size_t>(static_cast<int>(i) + 2 + kappa_of(lvl))] += cur[i];
    }
    cur = std::move(next);
  }
  EigCountTable t(n);
  for (int x = t.min_x(); x <= t.max_x(); ++x) t.at(x) = cur[static_cast<std::size_t>(x + 2 * n)];
  return t;
}

/// Same table from 2^{n1} N! / (n0! n1! n_{-2}!) over X = 3 n1 + 2 n0 - 2N.
[[nodiscard]] inline EigCountTable multinomial_counts(int n) {
  if (n < 1 || n > kMaxExactPairs) throw DomainError("multinomial_counts: N must be in [1, 24]");
  std::vector<BigInt> fact(static_cast<std::size_t>(n + 1));
  fact[0] = 1;
  for (int i = 1; i <= n; ++i) fact[static_cast<std::size_t>(i)] = fact[static_cast<std::size_t>(i - 1)] * i;
  EigCountTable t(n);
  for (int n1 = 0; n1 <= n; ++n1) {
    for (int n0 = 0; n0 + n1 <= n; ++n0) {
      const int nm2 = n - n0 - n1;
      const BigInt ways = (BigInt(1) << n1) * fact[static_cast<std::size_t>(n)] /
                          (fact[static_cast<std::size_t>(n0)] * fact[static_cast<std::size_t>(n1)] *
                           fact[static_cast<std::size_t>(nm2)]);
      t.at(3 * n1 + 2 * n0 - 2 * n) += ways;
    }
  }
  return t;
}

struct Moments {
  Rational mean;
  Rational variance;
};

[[nodiscard]] inline Moments dist_moments(const EigCountTable& t) {
  const BigInt total = t.total();
  BigInt s1 = 0;
  BigInt s2 = 0;
  for (int x = t.min_x(); x <= t.max_x(); ++x) {
    s1 += t.count(x) * x;
    s2 += t.count(x) * x * x;
  }
  Moments m;
  m.mean = Rational(s1, total);
  m.variance = Rational(s2, total) - m.mean * m.mean;
  return m;
}

[[nodiscard]] inline Moments dist_moments(int n) { return dist_moments(exact_counts(n)); }

/// Zero-mean normal limit with sigma = sqrt(3N/2). N may be non-integer.
struct GaussianLimit {
  double sigma = 0.0;

  [[nodiscard]] double pdf(double x) const {
    const double z = x / sigma;
    return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
  }
  [[nodiscard]] double cdf(double x) const { return 0.5 * std::erfc(-x / (sigma * std::sqrt(2.0))); }
};

[[nodiscard]] inline GaussianLimit gaussian_limit(double n) {
  if (!(n >= 1.0)) throw DomainError("gaussian_limit: N must be >= 1");
  return {std::sqrt(1.5 * n)};
}

[[nodiscard]] inline double probability(const EigCountTable& t, int x) {
  return Rational(t.count(x), t.total()).convert_to<double>();
}

/// sup_x |F_exact(x) - F_gauss(x)|, checked on both sides of every jump.
[[nodiscard]] inline double kolmogorov_distance(const EigCountTable& t) {
  const auto g = gaussian_limit(t.n());
  const BigInt total = t.total();
  BigInt cum = 0;
  double d = 0.0;
  for (int x = t.min_x(); x <= t.max_x(); ++x) {
    const double below = Rational(cum, total).convert_to<double>();
    cum += t.count(x);
    const double at = Rational(cum, total).convert_to<double>();
    const double f = g.cdf(x);
    d = std::max({d, std::abs(below - f), std::abs(at - f)});
  }
  return d;
}

/// E[exp(i c X)] under the exact distribution.
[[nodiscard]] inline std::complex<double> characteristic_function(const EigCountTable& t, double c) {
  std::complex<double> s{};
  for (int x = t.min_x(); x <= t.max_x(); ++x)
    s += probability(t, x) * std::exp(std::complex<double>(0.0, c * x));
  return s;
}

/// Columns: X, count, exact_probability, gaussian_density.
inline void write_eigdist_csv(std::ostream& os, const EigCountTable& t) {
  const auto g = gaussian_limit(t.n());
  os << "X,count,exact_probability,gaussian_density\n";
  for (int x = t.min_x(); x <= t.max_x(); ++x)
    os << x << ',' << t.count(x) << ',' << fmt17(probability(t, x)) << ',' << fmt17(g.pdf(x)) << '\n';
}

}  // namespace adeco

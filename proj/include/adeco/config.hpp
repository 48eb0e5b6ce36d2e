#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include "adeco/constants.hpp"
#include "adeco/errors.hpp"

namespace adeco {

/// Geometry, bath and sample parameters of the pair-phonon model. SI units.
struct PhysicalConfig {
  double d = 0.153e-9;       // intra-pair distance, m
  double a = 0.8e-9;         // lattice spacing, m
  double v_s = 4570.0;       // sound speed, m/s
  double T = 300.0;          // bath temperature, K
  double N = 1e23;           // number of pairs
  double theta = 0.0;        // pair axis vs field axis, rad
  double omega0_larmor = two_pi * 300e6;  // rad/s, only scales the initial state
  std::int64_t N1 = 100000;  // modes along the pair axis for discrete sums

  [[nodiscard]] double beta(const FundamentalConstants& c = codata2018) const {
    return c.beta(T);
  }
};

/// Gypsum parameter set used throughout the examples and tests.
[[nodiscard]] inline PhysicalConfig gypsum_defaults() { return PhysicalConfig{}; }

/// Throws ConfigError naming the first violated invariant.
inline void validate(const PhysicalConfig& c) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string(what) + " violated");
  };
  require(std::isfinite(c.d) && c.d > 0, "d > 0");
  require(std::isfinite(c.a) && c.a > 0, "a > 0");
  require(std::isfinite(c.v_s) && c.v_s > 0, "v_s > 0");
  require(std::isfinite(c.T) && c.T > 0, "T > 0");
  require(std::isfinite(c.N) && c.N >= 1, "N >= 1");
  require(c.N1 >= 2, "N1 >= 2");
  require(std::isfinite(c.theta), "theta finite");
  require(std::isfinite(c.omega0_larmor), "omega0_larmor finite");
  require(c.d < c.a, "d < a");
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::optional<double> to_double(std::string_view s) {
  double v = 0.0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) return std::nullopt;
  return v;
}

}  // namespace detail

/// Parses `key = value` lines; `#` starts a comment. Keys: d_m, a_m, v_s_mps,
/// T_K, N (required), theta_rad, omega0_larmor_radps, N1 (optional).
[[nodiscard]] inline PhysicalConfig parse_config(std::string_view text) {
  struct Key {
    const char* name;
    const char* short_name;
    bool required;
  };
  static constexpr Key keys[] = {
      {"d_m", "d", true},          {"a_m", "a", true},
      {"v_s_mps", "v_s", true},    {"T_K", "T", true},
      {"N", "N", true},            {"theta_rad", "theta", false},
      {"omega0_larmor_radps", "omega0_larmor", false},
      {"N1", "N1", false},
  };

  std::map<std::string, double, std::less<>> values;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const auto key = detail::trim(line.substr(0, eq));
    const auto raw = detail::trim(line.substr(eq + 1));
    bool known = false;
    for (const auto& k : keys) known = known || key == k.name;
    if (!known) throw ConfigError("unknown key " + std::string(key));
    if (values.contains(key)) throw ConfigError("duplicate key " + std::string(key));
    const auto v = detail::to_double(raw);
    if (!v) throw ConfigError("non-numeric value for key " + std::string(key) + ": '" +
                              std::string(raw) + "'");
    values.emplace(std::string(key), *v);
  }

  for (const auto& k : keys) {
    if (k.required && !values.contains(k.name))
      throw ConfigError(std::string("missing key ") + k.short_name + " (" + k.name + ")");
  }

  PhysicalConfig c;
  c.d = values.at("d_m");
  c.a = values.at("a_m");
  c.v_s = values.at("v_s_mps");
  c.T = values.at("T_K");
  c.N = values.at("N");
  if (auto it = values.find("theta_rad"); it != values.end()) c.theta = it->second;
  if (auto it = values.find("omega0_larmor_radps"); it != values.end())
    c.omega0_larmor = it->second;
  if (auto it = values.find("N1"); it != values.end()) {
    const double n1 = it->second;
    if (!(n1 == std::floor(n1)) || n1 < 0 || n1 > 1e15)
      throw ConfigError("N1 must be a non-negative integer");
    c.N1 = static_cast<std::int64_t>(n1);
  }
  validate(c);
  return c;
}

/// Serializes a config in the format accepted by parse_config.
[[nodiscard]] inline std::string to_config_text(const PhysicalConfig& c) {
  std::ostringstream os;
  os.precision(17);
  os << "d_m = " << c.d << "\na_m = " << c.a << "\nv_s_mps = " << c.v_s
     << "\nT_K = " << c.T << "\nN = " << c.N << "\ntheta_rad = " << c.theta
     << "\nomega0_larmor_radps = " << c.omega0_larmor << "\nN1 = " << c.N1 << '\n';
  return os.str();
}

}  // namespace adeco

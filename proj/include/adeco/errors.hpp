#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace adeco {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : Error {
  using Error::Error;
};

/// Raised when a mode with omega == 0 reaches a closed form that divides by omega.
struct SingularModeError : Error {
  using Error::Error;
};

struct DimensionError : Error {
  using Error::Error;
};

struct UnitError : Error {
  using Error::Error;
};

struct DomainError : Error {
  using Error::Error;
};

struct CsvError : Error {
  CsvError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  explicit CsvError(const std::string& what) : Error(what) {}
  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_ = 0;
};

/// Cutoff doubling ran out of schedule before two successive estimates agreed.
struct ConvergenceError : Error {
  ConvergenceError(const std::string& what, std::complex<double> previous,
                   std::complex<double> last)
      : Error(what), previous_(previous), last_(last) {}
  [[nodiscard]] std::complex<double> previous() const noexcept { return previous_; }
  [[nodiscard]] std::complex<double> last() const noexcept { return last_; }

 private:
  std::complex<double> previous_;
  std::complex<double> last_;
};

}  // namespace adeco

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ieqnls {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid grid, tableau, scenario or run configuration.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Field length or array shape does not match the grid.
class DimensionError : public Error {
public:
  using Error::Error;
};

/// Unknown registry or scenario name.
class LookupError : public Error {
public:
  using Error::Error;
};

/// Bad numeric input to a diagnostic (e.g. non-positive errors in an order fit).
class DataError : public Error {
public:
  using Error::Error;
};

/// Stage fixed-point iteration hit its cap without meeting the tolerance.
class SolverError : public Error {
public:
  SolverError(const std::string& what, std::size_t stage, std::size_t iterations,
              double last_increment)
      : Error(what), stage_(stage), iterations_(iterations),
        last_increment_(last_increment) {}

  std::size_t stage() const noexcept { return stage_; }
  std::size_t iterations() const noexcept { return iterations_; }
  double last_increment() const noexcept { return last_increment_; }
  /// Step number within an integration, 0 when raised outside one.
  std::size_t step() const noexcept { return step_; }
  void set_step(std::size_t step) noexcept { step_ = step; }

private:
  std::size_t stage_;
  std::size_t iterations_;
  double last_increment_;
  std::size_t step_ = 0;
};

/// NaN or Inf appeared inside a stage solve.
class DivergenceError : public SolverError {
public:
  using SolverError::SolverError;
};

}  // namespace ieqnls

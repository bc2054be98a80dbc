#pragma once

#include <stdexcept>
#include <string>

namespace sacnn {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid search space, configuration, run config or schedule parameters.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Missing, empty or malformed dataset input.
class DataError : public Error {
public:
  using Error::Error;
};

/// An objective evaluation failed (e.g. training diverged).
class EvaluationError : public Error {
public:
  using Error::Error;
};

/// Temperature calibration could not observe any deteriorating move.
class CalibrationError : public Error {
public:
  using Error::Error;
};

} // namespace sacnn

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace speedcast {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& message) : std::runtime_error(message) {}
};

// ---- core -------------------------------------------------------------

class EmptyWindow : public Error {
 public:
  using Error::Error;
};

class SeriesCountMismatch : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

// ---- regression -------------------------------------------------------

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class InvalidOrders : public Error {
 public:
  using Error::Error;
};

// ---- solvers ----------------------------------------------------------

class NumericalFailure : public Error {
 public:
  using Error::Error;
};

class InvalidConfig : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// ---- forecast ---------------------------------------------------------

class InsufficientHistory : public Error {
 public:
  using Error::Error;
};

// ---- metrics ----------------------------------------------------------

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

// ---- ingest -----------------------------------------------------------

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("parse error at line " + std::to_string(line) + ": " + what),
        line(line) {}
  std::size_t line;
};

class GridViolation : public Error {
 public:
  GridViolation(const std::string& sensor, std::int64_t timestamp,
                const std::string& what)
      : Error("grid violation for sensor " + sensor + " at t=" +
              std::to_string(timestamp) + ": " + what),
        sensor(sensor),
        timestamp(timestamp) {}
  std::string sensor;
  std::int64_t timestamp;
};

class TooSparse : public Error {
 public:
  TooSparse(const std::string& sensor, double missing_fraction,
            const std::string& what)
      : Error("sensor " + sensor + " too sparse (" +
              std::to_string(100.0 * missing_fraction) + "% missing): " + what),
        sensor(sensor),
        missing_fraction(missing_fraction) {}
  std::string sensor;
  double missing_fraction;
};

class InvalidSpec : public Error {
 public:
  using Error::Error;
};

}  // namespace speedcast

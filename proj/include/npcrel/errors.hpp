#pragma once

#include <stdexcept>
#include <string>

namespace npc {

// Base for everything the library throws on purpose. The CLI maps the
// subclasses onto exit codes (config -> 2, numeric -> 3).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// An electrical stress ratio above its rated range.
class StressOverrangeError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Missing/invalid configuration entries, unknown devices, absent factors.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Quadrature or time-stepping that cannot reach its accuracy target.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Time step too coarse for the capacitor dynamics or the carrier.
class StepSizeError : public NumericError {
 public:
  using NumericError::NumericError;
};

// A fitted model evaluated where it produces unphysical output.
class ModelValidityError : public Error {
 public:
  using Error::Error;
};

class FittingError : public Error {
 public:
  using Error::Error;
};

class UnsupportedStrategyError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace npc

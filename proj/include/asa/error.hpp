#ifndef ASA_ERROR_HPP_
#define ASA_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace asa {

// Base for every error raised by the simulator.  The message always names the
// offending quantity so it can be shown to a user verbatim.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

// A user whose rate target exceeds every channel's stationary on-fraction.
class InfeasibleUser : public Error {
 public:
  using Error::Error;
};

// A rate vector outside the centralized fixed-allocation region.
class Infeasible : public Error {
 public:
  using Error::Error;
};

// More users than channels.
class UnsupportedRegime : public Error {
 public:
  using Error::Error;
};

class InvalidAction : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

// Violated internal precondition of the policy state machine.
class LogicError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace asa

#endif  // ASA_ERROR_HPP_

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace oxisim {

/// Input outside the mathematical domain of an operation (negative time,
/// non-finite state, negative composition, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An invalid parameter set, integrator spec, sweep, fit or schedule.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The survival curve never crosses zero (alpha == 0, or no radicals at all).
class NoExtinction : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The integrator produced a non-finite state.
class NumericBlowUp : public std::runtime_error {
 public:
  NumericBlowUp(std::size_t step, const std::string& what)
      : std::runtime_error("numeric blow-up at step " + std::to_string(step) +
                           ": " + what),
        step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// step_minute called on a state that has already reached minute 1440.
class EndOfDay : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Config document error. Carries the offending key and 1-based line number
/// (0 when the error is not tied to a particular line).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::string key, const std::string& message)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " +
                                          message
                                    : message),
        line_(line),
        key_(std::move(key)) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& key() const noexcept { return key_; }

 private:
  std::size_t line_;
  std::string key_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace oxisim

#pragma once

#include <stdexcept>
#include <string>

namespace soilrf {

/// Invalid argument or geometry (non-positive length, empty family, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Query outside the calibrated/tabulated range. Never clamped silently.
class ExtrapolationError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Calibration data that violates the monotone-loading assumption.
class CalibrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Trace has no notch deeper than the requested threshold.
class NoDipError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Varactor bias combination that does not correspond to a defined pattern.
class NoDefinedPattern : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file (JSON/CSV).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {
[[noreturn]] void throw_domain(const std::string& what);
}

/// Throws DomainError unless value is finite and > 0.
void require_positive(double value, const char* name);
/// Throws DomainError unless value is finite and >= 0.
void require_non_negative(double value, const char* name);

}  // namespace soilrf

#pragma once

#include <stdexcept>
#include <string>

namespace pksns {

/// Caller broke a precondition (shape mismatch, axis out of range, ...).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Input outside the mathematical domain of a functional or inequality.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The integration cannot continue (NaN, dt underflow, lost resolution).
class NumericalAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Corrupt or truncated checkpoint (bad magic, CRC mismatch, size mismatch).
class CheckpointError : public IoError {
 public:
  using IoError::IoError;
};

}  // namespace pksns

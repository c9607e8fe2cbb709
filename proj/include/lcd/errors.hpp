#pragma once

#include <stdexcept>
#include <string>

namespace lcd {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Field shapes or grids do not agree.
class StructuralError : public Error {
 public:
  explicit StructuralError(const std::string& msg) : Error("structural: " + msg) {}
};

/// Spectrum is not Hermitian-symmetric, so its inverse transform is not real.
class SymmetryError : public Error {
 public:
  explicit SymmetryError(const std::string& msg) : Error("symmetry: " + msg) {}
};

/// Argument outside its admissible range.
class ParameterError : public Error {
 public:
  explicit ParameterError(const std::string& msg) : Error("parameter: " + msg) {}
};

/// Input makes a ratio or fit meaningless (zero denominator, empty series).
class DegenerateInputError : public Error {
 public:
  explicit DegenerateInputError(const std::string& msg) : Error("degenerate input: " + msg) {}
};

/// Non-finite coefficients appeared during time stepping.
class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& msg, double time) : Error("blow-up: " + msg), time_(time) {}
  double time() const { return time_; }
  std::string checkpoint_path;

 private:
  double time_;
};

class FitError : public Error {
 public:
  explicit FitError(const std::string& msg) : Error("fit: " + msg) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& msg) : Error("data: " + msg) {}
};

/// Series name not present in the expectation table.
class MappingError : public Error {
 public:
  explicit MappingError(const std::string& msg) : Error("mapping: " + msg) {}
};

/// Director normalization would divide by a near-zero magnitude.
class AmplitudeError : public Error {
 public:
  explicit AmplitudeError(const std::string& msg) : Error("amplitude: " + msg) {}
};

/// Configuration file could not be parsed or failed validation.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error("config: " + msg) {}
};

/// Checkpoint is corrupt or incompatible with the run configuration.
class CheckpointError : public Error {
 public:
  explicit CheckpointError(const std::string& msg) : Error("checkpoint: " + msg) {}
};

}  // namespace lcd

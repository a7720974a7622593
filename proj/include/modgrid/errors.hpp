#pragma once

#include <stdexcept>
#include <string>

namespace modgrid {

// Base of the library's failure taxonomy. The four mid-level classes map to
// CLI exit codes: ConfigError -> 2, MathError -> 3, PrecisionError -> 4.
// CacheError is handled internally (evict and recompute) and only escapes on
// unrecoverable filesystem trouble.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class MathError : public Error {
 public:
  using Error::Error;
};

class PrecisionError : public Error {
 public:
  using Error::Error;
};

class CacheError : public Error {
 public:
  using Error::Error;
};

// -- configuration / input errors ------------------------------------------

// Two series whose exponent supports cannot be merged into one lattice.
class IncompatibleSupport final : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// A space id, level, weight, or multiplier outside the shipped registry.
class UnsupportedSpace final : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Level parameter outside the supported Hauptmodul list.
class UnsupportedLevel final : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Operator level shares a factor with the group level.
class LevelConflict final : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// An index that does not belong to the family/grid it is used with.
class IndexMismatch final : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// -- mathematical invariant violations --------------------------------------

// Inversion (or leading-coefficient access) of the zero series.
class ZeroSeries final : public MathError {
 public:
  using MathError::MathError;
};

// Computed pivot/lead structure disagrees with the configured index data.
class InconsistentIndexData final : public MathError {
 public:
  using MathError::MathError;
};

// A required ladder rung (pole order) cannot be realized.
class LadderGap final : public MathError {
 public:
  using MathError::MathError;
};

// Expansion or decomposition leaves a nonzero residual.
class ResidualNonzero final : public MathError {
 public:
  using MathError::MathError;
};

// Grid coefficients fail the duality identity.
class DualityViolation final : public MathError {
 public:
  using MathError::MathError;
};

// A series exceeds the pole bound guaranteed by construction.
class PoleBoundViolated final : public MathError {
 public:
  using MathError::MathError;
};

// -- precision / window errors ----------------------------------------------

// Coefficient requested at or beyond the series' precision bound.
class BeyondPrecision final : public PrecisionError {
 public:
  using PrecisionError::PrecisionError;
};

// Inputs carry too little precision for the requested computation.
class PrecisionTooLow final : public PrecisionError {
 public:
  using PrecisionError::PrecisionError;
};

// A verification or comparison window shrank to nothing.
class WindowTooSmall final : public PrecisionError {
 public:
  using PrecisionError::PrecisionError;
};

// Pairing value cannot be certified complete at the given precisions.
class IncompletePairing final : public PrecisionError {
 public:
  using PrecisionError::PrecisionError;
};

// A requested window reaches beyond the data stored in a grid.
class WindowExceedsGrid final : public PrecisionError {
 public:
  using PrecisionError::PrecisionError;
};

// -- cache -------------------------------------------------------------------

// Stored cache entry fails its checksum or cannot be parsed.
class CacheCorrupt final : public CacheError {
 public:
  using CacheError::CacheError;
};

}  // namespace modgrid

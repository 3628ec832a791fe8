#pragma once

#include <stdexcept>
#include <string>

namespace blockid {

/// Base class for all library errors.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed input files (datasets, models, catalogs, manifests).
class ParseError : public Error {
  public:
    using Error::Error;
};

/// Contract violations on values: invalid traces, out-of-range arguments,
/// structurally inconsistent models.
class DomainError : public Error {
  public:
    using Error::Error;
};

/// Dimension or length mismatches.
class ShapeError : public DomainError {
  public:
    using DomainError::DomainError;
};

/// Metric is mathematically undefined for the given data (constant output,
/// zero scale).
class UndefinedMetricError : public DomainError {
  public:
    using DomainError::DomainError;
};

/// No acceptable model could be produced; carries per-candidate diagnostics.
class EstimationError : public Error {
  public:
    using Error::Error;
};

}  // namespace blockid

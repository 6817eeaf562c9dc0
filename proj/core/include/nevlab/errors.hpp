#pragma once

#include <stdexcept>
#include <string>

namespace nevlab {

/// Base class for every error raised by the library. Construction-time
/// validation and unusable numeric situations throw; expected verdicts
/// (a failed inequality, a degenerate mapping) are reported through result
/// structs instead.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Mismatched dimensions between a mapping, a hyperplane, or a matrix.
class DimensionError : public Error {
public:
  using Error::Error;
};

/// A circle average needed more pole nudges than the budget allows.
class QuadratureError : public Error {
public:
  using Error::Error;
};

/// A winding integral failed to settle on an integer, usually because a
/// zero sits on (or hugs) the contour and perturbation retries ran out.
class WindingError : public Error {
public:
  using Error::Error;
};

/// Raised when an operation needs a holomorphic expression but the tree
/// contains quotients or negative powers (potential poles inside the contour).
class PoleRiskError : public Error {
public:
  using Error::Error;
};

/// A growth-scale estimate (order, hyperorder, defect) has no meaningful
/// value on the supplied grid.
class EstimateError : public Error {
public:
  using Error::Error;
};

/// The exact feasibility solve for weight systems found no solution.
class InfeasibleError : public Error {
public:
  using Error::Error;
};

/// Config file rejected: syntax or cross-field validation.
class ConfigError : public Error {
public:
  using Error::Error;
};

}  // namespace nevlab

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace lmssc {

/// Base class for every error raised by this library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Views disagree on sample count, or a matrix has unexpected shape.
class DimensionMismatchError : public Error {
  public:
    using Error::Error;
};

/// Some class has no representative among the labeled samples.
class LabelCoverageError : public Error {
  public:
    using Error::Error;
};

/// A permutation or index map is not a bijection / out of range.
class IndexError : public Error {
  public:
    using Error::Error;
};

/// Duplicate-point pathology: the neighbor rule produced a non-positive alpha.
class DegenerateDistancesError : public Error {
  public:
    using Error::Error;
};

/// An iterative subproblem exceeded its cycling guard.
class MaxIterationsError : public Error {
  public:
    using Error::Error;
};

/// A linear system stayed singular after regularization.
class SingularSystemError : public Error {
  public:
    using Error::Error;
};

/// A connected component of the graph contains no labeled point, so the
/// harmonic system has no meaningful solution there. Carries the offending
/// component's node indices (storage order).
class DisconnectedUnlabeledError : public Error {
  public:
    DisconnectedUnlabeledError(const std::string& message, std::vector<Eigen::Index> nodes)
        : Error(message), component_nodes(std::move(nodes)) {}

    std::vector<Eigen::Index> component_nodes;
};

/// Text input could not be parsed; message carries the file and line.
class ParseError : public Error {
  public:
    using Error::Error;
};

/// A label rate too small to give every class at least one labeled sample.
class RateTooLowError : public Error {
  public:
    using Error::Error;
};

/// Filesystem-level failure (missing file, unwritable output).
class IoError : public Error {
  public:
    using Error::Error;
};

/// Non-fatal event recorded during a solve (ridge fallback, clamped alpha, ...).
struct Warning {
    std::string where;
    std::string message;
};

}  // namespace lmssc

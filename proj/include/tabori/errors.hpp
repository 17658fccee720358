#pragma once

#include <stdexcept>
#include <string>

namespace tabori {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A frame file that cannot be understood (bad syntax, wrong keypoint arity).
// Callers skip the frame and keep going; this never aborts a run.
struct MalformedFile : Error {
  using Error::Error;
};

// Manifest problems: unreadable file, duplicate ids, missing frame directory.
struct ManifestError : Error {
  using Error::Error;
};

// Invalid pipeline or tool configuration.
struct ConfigError : Error {
  using Error::Error;
};

// Statistics requested on a table with no observations.
struct EmptyTable : Error {
  using Error::Error;
};

// The synthetic generator cannot place body anchors so that the location
// regions stay disjoint (image too small or too elongated for the threshold).
struct InfeasiblePlacement : Error {
  using Error::Error;
};

// Comparison inputs disagree on the hand or on the significance level.
struct HandMismatch : Error {
  using Error::Error;
};
struct AlphaMismatch : Error {
  using Error::Error;
};

// Filesystem failures; the message carries the offending path.
struct IoError : Error {
  using Error::Error;
};

}  // namespace tabori

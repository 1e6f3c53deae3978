#pragma once

#include <stdexcept>
#include <string>

namespace egsim {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A configuration was paired with a machine of a different kind.
struct KindMismatch : Error {
  using Error::Error;
};

// A machine failed validation where a valid one was required.
struct InvalidModel : Error {
  using Error::Error;
};

// The capped arena grew past the configured position budget.
struct CapacityExceeded : Error {
  using Error::Error;
};

// refine() was called with bounds that do not dominate the previous ones.
struct BoundsNotLarger : Error {
  using Error::Error;
};

// JSON input did not match the schema. `path` is a JSON pointer.
struct SchemaError : Error {
  SchemaError(const std::string& msg, std::string path_)
      : Error(msg + " at " + path_), path(std::move(path_)) {}
  std::string path;
};

struct InconsistentParams : Error {
  using Error::Error;
};

// A state pair was queried that the UPC does not declare.
struct UnknownPair : Error {
  using Error::Error;
};

struct InvalidUpc : Error {
  using Error::Error;
};

}  // namespace egsim

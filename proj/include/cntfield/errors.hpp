#pragma once

#include <stdexcept>
#include <string>

namespace cntfield {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied value violates a documented precondition.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Degenerate or inadmissible geometry (coincident nodes, alpha on the boundary, ...).
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Random placement gave up after exhausting its attempt budget.
class CapacityError : public Error {
 public:
  CapacityError(const std::string& what, long attempts) : Error(what), attempts_(attempts) {}
  long attempts() const noexcept { return attempts_; }

 private:
  long attempts_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace cntfield

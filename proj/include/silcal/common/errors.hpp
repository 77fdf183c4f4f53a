#pragma once

#include <stdexcept>
#include <string>

namespace silcal {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied value violated a documented precondition.
class InvalidParameterError : public Error {
 public:
  using Error::Error;
};

/// Projection requested for a point at or behind the camera plane.
class BehindCameraError : public Error {
 public:
  using Error::Error;
};

/// An operation that needs at least one positive pixel got an empty mask.
class EmptyMaskError : public Error {
 public:
  using Error::Error;
};

/// Image file could not be read/written or has an unsupported layout.
class ImageIoError : public Error {
 public:
  using Error::Error;
};

/// Line extraction could not find two distinct peaks above threshold.
class HoughError : public Error {
 public:
  using Error::Error;
};

/// Tangent-line projection requested with the camera inside the cylinder.
class CameraInsideCylinderError : public Error {
 public:
  using Error::Error;
};

/// Line bundle too close to parallel for the closed-form converging point.
class SingularBundleError : public Error {
 public:
  SingularBundleError(const std::string& msg, double cond)
      : Error(msg), condition_number(cond) {}
  double condition_number;
};

/// Loss evaluation returned NaN/inf while probing a parameter.
class NonFiniteLossError : public Error {
 public:
  NonFiniteLossError(const std::string& msg, int index)
      : Error(msg), param_index(index) {}
  int param_index;
};

/// Malformed or unknown-key configuration input.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace silcal

#pragma once

#include <stdexcept>
#include <string>

namespace planar_pnp {

// Base for every failure raised by the library. Catch this to handle all
// solver errors uniformly; catch the derived types to tell them apart.
class PnpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Camera axis (nearly) perpendicular to the plane of motion.
class DegenerateRotation : public PnpError {
 public:
  using PnpError::PnpError;
};

// A world point lies on the camera's principal plane.
class ProjectionSingular : public PnpError {
 public:
  using PnpError::PnpError;
};

class TooFewValidTerms : public PnpError {
 public:
  using PnpError::PnpError;
};

class DegenerateResultant : public PnpError {
 public:
  using PnpError::PnpError;
};

class ZeroPolynomial : public PnpError {
 public:
  using PnpError::PnpError;
};

class NoCandidates : public PnpError {
 public:
  using PnpError::PnpError;
};

class DegeneratePosition : public PnpError {
 public:
  using PnpError::PnpError;
};

class RankDeficient : public PnpError {
 public:
  using PnpError::PnpError;
};

class NumericalFailure : public PnpError {
 public:
  using PnpError::PnpError;
};

// Malformed caller input (size mismatch, invalid intrinsics, ...).
class InvalidInput : public PnpError {
 public:
  using PnpError::PnpError;
};

}  // namespace planar_pnp

#pragma once

#include <stdexcept>
#include <string>

namespace dynreg {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Centered model points span a subspace of rank < 2.
class DegenerateCloud : public Error {
 public:
  using Error::Error;
};

class NonPositiveSigma : public Error {
 public:
  using Error::Error;
};

// Matrix too close to singular for a polar projection.
class SingularInput : public Error {
 public:
  using Error::Error;
};

class SingularInertia : public Error {
 public:
  using Error::Error;
};

// The integrator produced NaN/Inf; usually dt is too large.
class NonFiniteState : public Error {
 public:
  using Error::Error;
};

// Cross-covariance singular values are repeated or zero, so the
// equilibrium set is not a finite set of isolated rotations.
class DegenerateSpectrum : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace dynreg

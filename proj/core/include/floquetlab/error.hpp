#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace floquetlab {

// Base of every error thrown by the library. Subclasses exist so that callers
// (the CLI in particular) can map failures to exit codes without parsing text.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A rational stand-in does not carry enough digits for the requested query.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

// Input too small or too large for the operation (dimensions, list lengths).
class SizeError : public Error {
 public:
  using Error::Error;
};

// A derived interval does not fit inside the unit interval.
class RangeError : public Error {
 public:
  using Error::Error;
};

// Kick strength with lambda/hbar = 0 (mod 2 pi); the perturbation is the identity.
class TrivialPerturbationError : public Error {
 public:
  using Error::Error;
};

// Kick states are not orthonormal (after truncation).
class EnsembleError : public Error {
 public:
  using Error::Error;
};

// Dynamics trace and eigen-decomposition were not produced from the same
// matrix and state.
class ProvenanceError : public Error {
 public:
  using Error::Error;
};

// A numerical tolerance (unitarity, eigenvalue modulus) was violated.
class ToleranceError : public Error {
 public:
  using Error::Error;
};

// Evaluation point coincides with an unperturbed eigenphase carrying weight.
class PoleError : public Error {
 public:
  PoleError(std::size_t index, const std::string& what)
      : Error(what), index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

}  // namespace floquetlab

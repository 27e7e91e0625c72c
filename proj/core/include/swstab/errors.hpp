#pragma once

#include <stdexcept>
#include <string>

namespace swstab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input matrix has a non-finite entry.
class NonFiniteValue : public Error {
 public:
  using Error::Error;
};

/// One of the two matrices fails trace < 0, det > 0.
class NotHurwitz : public Error {
 public:
  NotHurwitz(char which, double trace, double det);

  char which() const noexcept { return which_; }
  double trace() const noexcept { return trace_; }
  double det() const noexcept { return det_; }

 private:
  char which_;
  double trace_;
  double det_;
};

/// Both matrices are diagonalizable; that case is classified by the
/// cross-ratio conditions of the diagonalizable theory and is not handled here.
class OutOfScope : public Error {
 public:
  using Error::Error;
};

/// The pair commutes, so no normal form exists (the system is trivially GUAS).
class CommutingPair : public Error {
 public:
  using Error::Error;
};

/// expm_normal was handed a matrix that is not one of the normal-form shapes.
class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionViolated : public Error {
 public:
  using Error::Error;
};

/// Two independently computed quantities that must agree did not. Never
/// expected on valid input; signals a bug or a numerically hopeless input.
class InternalInconsistency : public Error {
 public:
  using Error::Error;
};

class NotCollinear : public InternalInconsistency {
 public:
  using InternalInconsistency::InternalInconsistency;
};

class InconsistentInvariants : public InternalInconsistency {
 public:
  using InternalInconsistency::InternalInconsistency;
};

}  // namespace swstab

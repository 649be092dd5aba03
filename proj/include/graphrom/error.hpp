#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace graphrom {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller supplied something outside an operation's contract.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A numerical step produced a result that violates its own post-condition.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// One of the two structural assumptions of the reduced model failed:
///   1 - the zero-eigenvalue multiplicity is not captured,
///   2 - the nullspace vector used for rescaling has a vanishing entry.
class AssumptionViolation : public Error {
 public:
  AssumptionViolation(int assumption, std::size_t index, const std::string& what)
      : Error(what), assumption_(assumption), index_(index) {}

  int assumption() const noexcept { return assumption_; }
  std::size_t index() const noexcept { return index_; }

 private:
  int assumption_;
  std::size_t index_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace graphrom

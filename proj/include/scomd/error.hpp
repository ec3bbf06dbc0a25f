#pragma once

#include <stdexcept>
#include <string>

namespace scomd {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument violates a documented precondition (non-finite input, point off the simplex, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inadmissible data: all-zero price relatives, non-PSD observables, bad files.
class DataError : public Error {
 public:
  using Error::Error;
};

/// A learning-rate schedule or bound was requested outside its validity region.
class ScheduleError : public Error {
 public:
  using Error::Error;
};

/// The loss is infinite at the current iterate (<a, x> = 0 or tr(A rho) = 0).
class DegenerateRound : public Error {
 public:
  using Error::Error;
};

/// The scalar multiplier solver did not reach its residual tolerance.
class NewtonFailure : public Error {
 public:
  NewtonFailure(const std::string& what, int iterations, double residual)
      : Error(what), iterations_(iterations), residual_(residual) {}

  int iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

 private:
  int iterations_;
  double residual_;
};

/// An iterative solver exhausted its iteration budget.
class SolverBudgetExhausted : public Error {
 public:
  using Error::Error;
};

}  // namespace scomd

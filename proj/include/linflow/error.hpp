#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace linflow {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A NaN or infinite entry reached a public operation.
class NonFiniteInput : public Error {
 public:
  using Error::Error;
};

/// Shape mismatch: non-square where square is required, incompatible
/// products, wrong vector lengths, mixed fields.
class DimensionError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class SingularMatrix : public Error {
 public:
  SingularMatrix(const std::string& what, std::size_t rank)
      : Error(what + " (detected rank " + std::to_string(rank) + ")"), rank_(rank) {}
  std::size_t rank() const noexcept { return rank_; }

 private:
  std::size_t rank_;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::size_t iterations)
      : Error(what + " (after " + std::to_string(iterations) + " iterations)"),
        iterations_(iterations) {}
  std::size_t iterations() const noexcept { return iterations_; }

 private:
  std::size_t iterations_;
};

/// Jordan chain construction produced a basis whose condition estimate
/// exceeds what the rank tolerance can certify.
class IllConditioned : public Error {
 public:
  IllConditioned(const std::string& what, double condition)
      : Error(what + " (condition estimate " + std::to_string(condition) + ")"),
        condition_(condition) {}
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

/// Rank decisions that contradict each other (e.g. a cluster whose
/// generalized eigenspace dimension disagrees with its multiplicity, or
/// two routes to an iterated core that disagree).
class InternalConsistencyError : public Error {
 public:
  using Error::Error;
};

/// A bounded-flow operation received a generator that is not bounded.
class NotBounded : public Error {
 public:
  using Error::Error;
};

class OverflowError : public Error {
 public:
  using Error::Error;
};

}  // namespace linflow

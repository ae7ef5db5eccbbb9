#pragma once

#include <stdexcept>
#include <string>

namespace bcr {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A matrix required to be PSD has an eigenvalue below the rejection threshold.
class NotPsdError : public Error {
 public:
  using Error::Error;
};

// Cholesky factorization failed (matrix not positive definite at the given ridge).
class NotSpdError : public Error {
 public:
  using Error::Error;
};

// Input failed schema or shape validation (JSON files, CLI arguments, specs).
class ValidationError : public Error {
 public:
  using Error::Error;
};

class NegativeBoundError : public Error {
 public:
  using Error::Error;
};

class RankOutOfRangeError : public Error {
 public:
  using Error::Error;
};

class NoEqualityConstraintsError : public Error {
 public:
  using Error::Error;
};

class ZeroMatrixError : public Error {
 public:
  using Error::Error;
};

class DegenerateGraphError : public Error {
 public:
  using Error::Error;
};

class TooLargeError : public Error {
 public:
  using Error::Error;
};

class InfeasibleError : public Error {
 public:
  using Error::Error;
};

}  // namespace bcr

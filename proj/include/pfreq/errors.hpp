#pragma once

#include <stdexcept>
#include <string>

namespace pfreq {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidShape : public Error {
 public:
  using Error::Error;
};

class Infeasible : public Error {
 public:
  using Error::Error;
};

class UnboundedInradius : public Error {
 public:
  using Error::Error;
};

class DegenerateContact : public Error {
 public:
  using Error::Error;
};

class EnvelopeFailure : public Error {
 public:
  using Error::Error;
};

class TangencyViolation : public Error {
 public:
  using Error::Error;
};

class OutsideDomain : public Error {
 public:
  using Error::Error;
};

class MeshFailure : public Error {
 public:
  using Error::Error;
};

class ZeroDenominator : public Error {
 public:
  using Error::Error;
};

class InadmissibleExponent : public Error {
 public:
  using Error::Error;
};

// q = infinity is admissible for p > N but outside the solver's reach.
class Unsupported : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

// Iterative solve stopped before meeting its tolerance; carries the best value
// reached.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, double best) : Error(what), best_(best) {}
  double best() const { return best_; }

 private:
  double best_;
};

}  // namespace pfreq

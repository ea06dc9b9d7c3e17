#pragma once

#include <stdexcept>
#include <string>

namespace depth {

// Base for every domain failure raised by the library. The message names the
// violated precondition so callers can surface it verbatim.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside its type's domain (non-finite, negative count, p > 1, ...).
class InvalidArgument : public ModelError {
 public:
  using ModelError::ModelError;
};

// A dependence factor pushes a joint probability outside [0,1].
class DependenceOutOfRange : public ModelError {
 public:
  using ModelError::ModelError;
};

// No posture reaches the requested breach likelihood.
class InfeasibleTarget : public ModelError {
 public:
  using ModelError::ModelError;
};

// A sampled range leaves the region where a price or curve is defined.
class InvalidRange : public ModelError {
 public:
  using ModelError::ModelError;
};

// A conditional probability in a sampling chain leaves [0,1].
class ChainInfeasible : public ModelError {
 public:
  using ModelError::ModelError;
};

// A curve sampler produced no feasible point.
class EmptySeries : public ModelError {
 public:
  using ModelError::ModelError;
};

}  // namespace depth

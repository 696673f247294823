#pragma once

#include <stdexcept>
#include <string>

namespace bangbang {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Simplex or volume constraint violated by an input design or quantity list.
class ConstraintError : public Error {
 public:
  using Error::Error;
};

class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// Numerical failure: non-convergence, failed root bracketing, non-finite data.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace bangbang

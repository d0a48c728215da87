#pragma once

#include <stdexcept>
#include <string>

namespace ergoplan {

/// Base class for every error raised by the planner library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// STL evaluation
class EmptyWindow : public Error {
 public:
  using Error::Error;
};

class UnknownChannel : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// Dynamics
class LengthMismatch : public Error {
 public:
  using Error::Error;
};

// Mission
class HeadingNotAxisAligned : public Error {
 public:
  using Error::Error;
};

class InvalidScenario : public Error {
 public:
  using Error::Error;
};

// Routing
class EmptyScenario : public Error {
 public:
  using Error::Error;
};

class Infeasible : public Error {
 public:
  using Error::Error;
};

class MalformedSolution : public Error {
 public:
  using Error::Error;
};

// Optimization
class NonFiniteValue : public Error {
 public:
  using Error::Error;
};

}  // namespace ergoplan

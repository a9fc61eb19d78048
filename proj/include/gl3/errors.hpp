#pragma once

#include <stdexcept>
#include <string>

namespace gl3 {

// Error taxonomy. Domain errors are precondition violations on inputs;
// NotConverged is the only runtime numerical failure.
struct NotCoprime : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NoSolution : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct BadModuli : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct BadLevel : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct UnsupportedCell : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NotPrime : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NotCoprimeSplit : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NotPrimitive : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct TooLarge : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct BadTwist : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct AllZeroFrequencies : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct ContourTooLow : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NotConverged : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct Overflow : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace gl3

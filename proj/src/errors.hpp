#pragma once

#include <stdexcept>

namespace clsbm {

// Invalid parameters, configuration or call preconditions.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An iterative numerical routine failed to converge.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File could not be read or written; message carries the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace clsbm

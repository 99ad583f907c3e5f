#pragma once

#include <stdexcept>
#include <string>

namespace hijackmap {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or missing input data: bad record lines, bad rows, unreadable files.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Two artifacts that must agree do not (e.g. checkpoint vs. vectorizer).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// Tensor operand shapes do not agree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Optimization diverged or received non-finite values.
class TrainingError : public Error {
 public:
  using Error::Error;
};

}  // namespace hijackmap

#ifndef DEPPARSE_ERROR_H_
#define DEPPARSE_ERROR_H_

#include <stdexcept>
#include <string>

namespace depparse {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input files (CoNLL, vocabularies, embeddings, model containers).
class FormatError : public Error {
 public:
  using Error::Error;
};

// A transition or sequence that violates the arc-standard preconditions.
class TransitionError : public Error {
 public:
  using Error::Error;
};

// Tensor shape or model dimension mismatch.
class ShapeError : public Error {
 public:
  using Error::Error;
};

}  // namespace depparse

#endif  // DEPPARSE_ERROR_H_

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace zchain {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed formula text. `offset` is the byte position of the offending token.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Unknown symbol, arity mismatch, or a formula used outside its signature.
class SignatureError : public Error {
 public:
  using Error::Error;
};

/// An operation needed labels or elements outside the stored fragment.
/// The caller has to enlarge the fragment (or shrink the window).
class InteriorViolation : public Error {
 public:
  using Error::Error;
};

class UnknownElement : public Error {
 public:
  using Error::Error;
};

class FragmentError : public Error {
 public:
  using Error::Error;
};

class DictionaryError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class NotPrenex : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

}  // namespace zchain

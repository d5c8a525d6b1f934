#pragma once

#include <stdexcept>
#include <string>

namespace mahler {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input text (fixture JSON, rationals, decimals).
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(what) {}
};

/// A fixture or argument violates a structural invariant.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

/// Certified error bounds are too wide to decide a comparison.
class PrecisionError : public Error {
 public:
  explicit PrecisionError(const std::string& what) : Error(what) {}
};

/// Two values agree within tolerance without being provably equal.
class AmbiguityError : public PrecisionError {
 public:
  explicit AmbiguityError(const std::string& what) : PrecisionError(what) {}
};

/// A vector has support outside the place set an operation was asked to use.
class SupportError : public Error {
 public:
  explicit SupportError(const std::string& what) : Error(what) {}
};

/// Something that cannot happen for valid inputs did happen.
class InternalError : public Error {
 public:
  explicit InternalError(const std::string& what) : Error(what) {}
};

}  // namespace mahler

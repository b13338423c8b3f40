#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gainlab {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Domain errors from the relative-change functions.

/// Individual gain is undefined when the initial score equals 1.
class GainUndefined : public Error {
 public:
  using Error::Error;
};

/// Fractional increase is undefined when the initial score equals 0.
class IncreaseUndefined : public Error {
 public:
  using Error::Error;
};

/// Logarithmic difference is undefined when either score equals 0.
class LogUndefined : public Error {
 public:
  using Error::Error;
};

/// A value fell outside its documented range (scores outside [0,1],
/// gains above 1, invalid probabilities, ...).
class OutOfRange : public Error {
 public:
  using Error::Error;
};

/// Two ChangeValues of different kinds were combined.
class KindMismatch : public Error {
 public:
  using Error::Error;
};

// Statistical errors.

/// A statistic was requested that needs spread (or more observations)
/// than the sample provides.
class DegenerateSample : public Error {
 public:
  using Error::Error;
};

/// An operation received an empty sample.
class EmptySample : public Error {
 public:
  using Error::Error;
};

/// The regression design matrix does not admit a unique fit.
class RankDeficient : public Error {
 public:
  using Error::Error;
};

// Ingestion and I/O errors. These carry the 1-based input line number
// where the problem was found (0 when no line applies).

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class RangeError : public Error {
 public:
  RangeError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class DuplicateId : public Error {
 public:
  DuplicateId(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// A simulation spec asks for something impossible (inverted bounds,
/// correlations outside [-1,1], truncation that rejects every draw).
class SpecError : public Error {
 public:
  using Error::Error;
};

}  // namespace gainlab

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace collgram {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file. `line()` is 1-based, 0 when not tied to a line.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// File carries a format version this build does not understand.
class VersionError : public Error {
 public:
  using Error::Error;
};

/// Invalid arguments or setup (empty lexicon, bad endpoint, one-class data).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A sentiment provider could not produce a score.
class ProviderError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace collgram

#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace netsample {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. Carries the source name and 1-based line.
class ParseError : public Error {
 public:
  ParseError(std::string source, std::size_t line, const std::string& what);

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

/// A value or configuration violates a documented invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// An estimator was handed a zero inclusion frequency (or zero g_i).
class ZeroFrequencyError : public Error {
 public:
  explicit ZeroFrequencyError(std::vector<std::int64_t> node_ids);

  const std::vector<std::int64_t>& node_ids() const noexcept { return ids_; }

 private:
  std::vector<std::int64_t> ids_;
};

}  // namespace netsample

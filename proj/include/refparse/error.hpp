#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace refparse {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed annotation XML. `offset` is a byte offset into the XML input.
class AnnotationError : public Error {
 public:
  AnnotationError(const std::string& what, std::size_t offset)
      : Error(what + " at byte " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Corrupt, truncated or version-mismatched model file.
class ModelFormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace refparse

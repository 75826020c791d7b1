#pragma once

#include <stdexcept>
#include <string>

namespace bpm {

// Base class for every error raised by the toolkit. Precondition violations,
// malformed inputs and failed external calls all surface as this type (or a
// subclass) with a message that names the offending value.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed file or JSON payload. `path` names the key / byte offset that
// failed, e.g. "000314[2]".
class ParseError : public Error {
 public:
  ParseError(std::string path, const std::string& what)
      : Error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace bpm

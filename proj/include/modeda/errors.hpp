#pragma once

#include <stdexcept>
#include <string>

namespace modeda {

// Malformed input file. Messages carry "<path>:<line>: <what>" where a line
// number makes sense.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  ParseError(const std::string& path, std::size_t line, const std::string& what)
      : std::runtime_error(path + ":" + std::to_string(line) + ": " + what) {}
};

// Lookup of a word that is not in an embedding store's vocabulary.
class OovError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace modeda

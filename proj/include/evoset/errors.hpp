#pragma once

#include <stdexcept>
#include <string>

namespace evoset {

// Base class for every error raised by the library. Subclasses carry the
// offending witness where one exists.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace evoset

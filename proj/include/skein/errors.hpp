#pragma once

#include <stdexcept>
#include <string>

namespace skein {

// Base for every error raised by the library. The CLI maps these to exit code 2
// (bad input) unless a command decides otherwise.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IncompatibleVariants : public Error {
 public:
  using Error::Error;
};

class SpecMismatch : public Error {
 public:
  using Error::Error;
};

class NotSymmetric : public Error {
 public:
  using Error::Error;
};

class NotInImage : public Error {
 public:
  using Error::Error;
};

class GenusMismatch : public Error {
 public:
  using Error::Error;
};

class MalformedGraph : public Error {
 public:
  using Error::Error;
};

class SingularLocus : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace skein

#pragma once

#include <stdexcept>
#include <string>

namespace rext {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularMetric : public Error {
 public:
  using Error::Error;
};
class DerivativeUnsupported : public Error {
 public:
  using Error::Error;
};
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};
class StepSizeUnderflow : public Error {
 public:
  using Error::Error;
};
class NonFiniteState : public Error {
 public:
  using Error::Error;
};
class IllConditioned : public Error {
 public:
  using Error::Error;
};
class DomainError : public Error {
 public:
  using Error::Error;
};
class ConfigError : public Error {
 public:
  using Error::Error;
};
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace rext

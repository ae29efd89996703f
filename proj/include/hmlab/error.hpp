#pragma once

#include <stdexcept>
#include <string>

namespace hmlab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A point fell outside the region where a normal chart is trusted.
class OutOfChart : public Error {
 public:
  using Error::Error;
};

// A requested scale is too small for the mesh.
class UnderResolved : public Error {
 public:
  UnderResolved(const std::string& what, double requested, double minimum);
  double requested() const { return requested_; }
  double minimum() const { return minimum_; }

 private:
  double requested_;
  double minimum_;
};

// A ball or bump would leave the domain.
class OutOfDomain : public Error {
 public:
  using Error::Error;
};

class ConstructionError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string& field, const std::string& message);
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace hmlab

#pragma once

#include <stdexcept>
#include <string>

namespace artic {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A joint value was outside its [lower, upper] motion range.
class LimitViolation : public Error {
 public:
  LimitViolation(int joint_id, double value, double lower, double upper);
  int joint_id() const { return joint_id_; }

 private:
  int joint_id_;
};

/// Malformed input: bad ids, incongruent arrays, wrong counts.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Binary or JSON file could not be read or had the wrong magic/version.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Training produced a non-finite loss.
class DivergenceError : public Error {
 public:
  DivergenceError(int epoch, const std::string& what);
  int epoch() const { return epoch_; }

 private:
  int epoch_;
};

}  // namespace artic

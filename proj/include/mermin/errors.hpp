#pragma once

#include <stdexcept>
#include <string>

namespace mermin {

/// Base of every domain error raised by the library. The CLI maps these to
/// exit status 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// A caller broke an operation's precondition (n_runs = 0, empty log, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class NegativeEntry : public Error {
 public:
  using Error::Error;
};

class SumNotOne : public Error {
 public:
  SumNotOne(std::string const& what, std::string deficit)
      : Error(what), deficit_(std::move(deficit)) {}
  /// 1 - sum, in "num/den" form.
  std::string const& deficit() const noexcept { return deficit_; }

 private:
  std::string deficit_;
};

class InvalidTables : public Error {
 public:
  using Error::Error;
};

class MalformedCertificate : public Error {
 public:
  using Error::Error;
};

class ModelEvaluationFailure : public Error {
 public:
  using Error::Error;
};

/// model_report refuses models whose message function reads the setting.
class ModelRefused : public Error {
 public:
  using Error::Error;
};

class EmptyPair : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace mermin

#pragma once

#include <stdexcept>
#include <string>

namespace colhyp {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidGridError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class KernelNotPsdError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Sampled path too coarse for the requested mollifier scale.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// Evaluation requested outside a field's safe region.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A characteristic left the region where its speed field is defined.
class DomainEscapeError : public DomainError {
 public:
  DomainEscapeError(const std::string& what, double exit_time)
      : DomainError(what), exit_time_(exit_time) {}
  double exit_time() const noexcept { return exit_time_; }

 private:
  double exit_time_;
};

class ScaleError : public Error {
 public:
  using Error::Error;
};

/// kappa <= c T: the trapezoid K_T is empty.
class EmptyDomainError : public Error {
 public:
  using Error::Error;
};

class IterationLimitError : public Error {
 public:
  IterationLimitError(const std::string& what, int iterations, double last_difference)
      : Error(what), iterations_(iterations), last_difference_(last_difference) {}
  int iterations() const noexcept { return iterations_; }
  double last_difference() const noexcept { return last_difference_; }

 private:
  int iterations_;
  double last_difference_;
};

class InvertibilityError : public Error {
 public:
  using Error::Error;
};

/// Config parse/validation failure; `key_path()` names the offending entry.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& key_path, const std::string& message)
      : Error(key_path.empty() ? message : key_path + ": " + message), key_path_(key_path) {}
  const std::string& key_path() const noexcept { return key_path_; }

 private:
  std::string key_path_;
};

}  // namespace colhyp

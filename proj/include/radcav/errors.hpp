#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace radcav {

// Two families: configuration problems (CLI exit 1) and numerical failures
// (CLI exit 2).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

struct Violation {
  enum class Kind { MissingKey, OutOfRange, TypeError };
  Kind kind;
  std::string key;
  std::string value;    // empty for MissingKey
  std::string allowed;  // human-readable range or type

  std::string describe() const;
};

class ValidationError : public ConfigError {
 public:
  explicit ValidationError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }
  bool has(Violation::Kind kind, const std::string& key) const;

 private:
  std::vector<Violation> violations_;
};

class ParseError : public ConfigError {
 public:
  ParseError(int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

class UnknownKey : public ConfigError {
 public:
  UnknownKey(int line, std::string key);
  const std::string& key() const { return key_; }
  int line() const { return line_; }

 private:
  int line_;
  std::string key_;
};

class TypeError : public ConfigError {
 public:
  TypeError(std::string key, const std::string& expected, const std::string& got);
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

class QuadratureUnderResolved : public NumericalError {
 public:
  explicit QuadratureUnderResolved(double relative_change);
  double relative_change() const { return relative_change_; }

 private:
  double relative_change_;
};

class TruncationNotConverged : public NumericalError {
 public:
  TruncationNotConverged(double last_term_ratio, std::size_t truncation);
  double last_term_ratio() const { return ratio_; }

 private:
  double ratio_;
};

class MomentOverflow : public NumericalError {
 public:
  explicit MomentOverflow(std::size_t index);
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

class ApproximationInvalid : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class StepSizeTooCoarse : public NumericalError {
 public:
  StepSizeTooCoarse(double deviation, double tolerance, const std::string& context);
  double deviation() const { return deviation_; }

 private:
  double deviation_;
};

class NonFiniteState : public NumericalError {
 public:
  explicit NonFiniteState(double time);
  double time() const { return time_; }

 private:
  double time_;
};

class TimeMismatch : public NumericalError {
 public:
  TimeMismatch(double node_time, double internal_time);
};

class GridTooNarrow : public NumericalError {
 public:
  explicit GridTooNarrow(double boundary_ratio);
  double boundary_ratio() const { return ratio_; }

 private:
  double ratio_;
};

}  // namespace radcav

#include "radcav/errors.hpp"

#include <algorithm>
#include <sstream>

namespace radcav {
namespace {

std::string join_violations(const std::vector<Violation>& violations) {
  std::ostringstream os;
  os << "invalid parameters:";
  for (const auto& v : violations) os << "\n  " << v.describe();
  return os.str();
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

std::string Violation::describe() const {
  switch (kind) {
    case Kind::MissingKey:
      return "MissingKey(" + key + ")";
    case Kind::OutOfRange:
      return "OutOfRange(" + key + " = " + value + ", allowed " + allowed + ")";
    case Kind::TypeError:
      return "TypeError(" + key + " = '" + value + "', expected " + allowed + ")";
  }
  return key;
}

ValidationError::ValidationError(std::vector<Violation> violations)
    : ConfigError(join_violations(violations)), violations_(std::move(violations)) {}

bool ValidationError::has(Violation::Kind kind, const std::string& key) const {
  return std::any_of(violations_.begin(), violations_.end(),
                     [&](const Violation& v) { return v.kind == kind && v.key == key; });
}

ParseError::ParseError(int line, const std::string& what)
    : ConfigError("parse error on line " + std::to_string(line) + ": " + what), line_(line) {}

UnknownKey::UnknownKey(int line, std::string key)
    : ConfigError("unknown key '" + key + "' on line " + std::to_string(line)),
      line_(line),
      key_(std::move(key)) {}

TypeError::TypeError(std::string key, const std::string& expected, const std::string& got)
    : ConfigError("key '" + key + "': expected " + expected + ", got '" + got + "'"),
      key_(std::move(key)) {}

QuadratureUnderResolved::QuadratureUnderResolved(double relative_change)
    : NumericalError("angular quadrature under-resolved: doubling nodes changed the result by " +
                     fmt_double(relative_change) + " (relative)"),
      relative_change_(relative_change) {}

TruncationNotConverged::TruncationNotConverged(double last_term_ratio, std::size_t truncation)
    : NumericalError("noise-moment series not converged at truncation N = " +
                     std::to_string(truncation) + ": last term / partial sum = " +
                     fmt_double(last_term_ratio)),
      ratio_(last_term_ratio) {}

MomentOverflow::MomentOverflow(std::size_t index)
    : NumericalError("noise moment m_" + std::to_string(index) + " overflows double range"),
      index_(index) {}

StepSizeTooCoarse::StepSizeTooCoarse(double deviation, double tolerance,
                                     const std::string& context)
    : NumericalError("step size too coarse (" + context + "): step halving changed results by " +
                     fmt_double(deviation) + " > " + fmt_double(tolerance)),
      deviation_(deviation) {}

NonFiniteState::NonFiniteState(double time)
    : NumericalError("non-finite state encountered at t = " + fmt_double(time)), time_(time) {}

TimeMismatch::TimeMismatch(double node_time, double internal_time)
    : NumericalError("internal state time " + fmt_double(internal_time) +
                     " does not match output node time " + fmt_double(node_time)) {}

GridTooNarrow::GridTooNarrow(double boundary_ratio)
    : NumericalError("detuning grid too narrow: boundary integrand / peak = " +
                     fmt_double(boundary_ratio) + " > 1e-4"),
      ratio_(boundary_ratio) {}

}  // namespace radcav

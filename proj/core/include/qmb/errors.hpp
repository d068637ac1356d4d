#pragma once

#include <stdexcept>
#include <string>

namespace qmb {

/// Failure classes surfaced by the library. The CLI maps these onto process
/// exit codes (validation -> 2, parse -> 3, resource -> 4, solver -> 5).
enum class ErrorKind {
  input,       // caller passed a malformed argument (dimension, range, ...)
  validation,  // a channel/state failed its defining invariants
  parse,       // JSON document malformed or violates the schema
  resource,    // a configured limit (tensor budget) would be exceeded
  solver,      // an iterative solver failed to converge
  internal,    // cross-check disagreement; indicates a bug, never swallowed
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  static Error input(const std::string& m) { return {ErrorKind::input, m}; }
  static Error validation(const std::string& m) { return {ErrorKind::validation, m}; }
  static Error parse(const std::string& m) { return {ErrorKind::parse, m}; }
  static Error resource(const std::string& m) { return {ErrorKind::resource, m}; }
  static Error solver(const std::string& m) { return {ErrorKind::solver, m}; }
  static Error internal(const std::string& m) { return {ErrorKind::internal, m}; }

private:
  ErrorKind kind_;
};

}  // namespace qmb

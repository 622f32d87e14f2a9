#pragma once

#include <stdexcept>
#include <string>

namespace cuspsheaf {

/// Process exit statuses used by the command-line tool.
enum class ExitCode : int {
  ok = 0,
  parse = 1,
  invariant = 2,
  math = 3,
  selftest_failure = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

/// Malformed input text or document structure.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(ExitCode::parse, what) {}
};

/// A value violates the invariants of its type.
class InvariantError : public Error {
 public:
  explicit InvariantError(const std::string& what)
      : Error(ExitCode::invariant, what) {}
};

/// Mathematical precondition failures.
class MathError : public Error {
 public:
  enum class Reason {
    division_by_zero,
    non_unit,
    precision_mismatch,
    insufficient_precision,
    rank_deficiency,
    torsion,
    not_a_morphism,
  };

  MathError(Reason reason, const std::string& what)
      : Error(ExitCode::math, what), reason_(reason) {}

  Reason reason() const noexcept { return reason_; }

 private:
  Reason reason_;
};

}  // namespace cuspsheaf

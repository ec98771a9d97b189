#ifndef STABLEREL_DIAGNOSTICS_HPP
#define STABLEREL_DIAGNOSTICS_HPP

#include <stdexcept>
#include <string>

namespace stablerel {

enum class DiagCode {
    ParseError,          // malformed surface syntax
    DuplicateDefinition, // redefinition without the redefine flag
    UndefinedRelation,   // call to a relation that was never defined
    InvalidGoal,         // e.g. noto wrapping a non-call goal
    NotGroundable,       // contradiction check needs a non-Datalog relation
    CapExceeded,         // ground program too large for enumeration
    Floundering,         // negated goal reached with unbound arguments
    BudgetExhausted,     // definite search exceeded the step budget
    InvalidArgument,     // bad engine/session configuration or query form
};

// Diagnostics are user-facing failures: they carry a code so the CLI and the
// C API can map them to exit codes, and a message naming the offender.
class Diagnostic : public std::runtime_error {
  public:
    Diagnostic(DiagCode code, std::string message)
        : std::runtime_error(std::move(message)), code_(code) {}

    DiagCode code() const { return code_; }

    bool is_parse_error() const { return code_ == DiagCode::ParseError; }

  private:
    DiagCode code_;
};

} // namespace stablerel

#endif

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sfbox {

enum class Code {
  // signatures and SF terms
  UndeclaredAtom,
  DuplicateName,
  NonAtomicTarget,
  UnboundVar,
  ContextMismatch,
  NotClosed,
  SpineArity,
  TypeMismatch,
  LengthMismatch,
  EntryTypeMismatch,
  BadShift,
  LookupFailure,
  NonLinear,
  WeakeningTooDeep,
  // Core-ML
  ArityError,
  NonAtomicContextualType,
  CannotSynthesize,
  CannotInferContext,
  PatternTypeMismatch,
  UnboundContextVar,
  ReservedName,
  UnreachableBranch,
  // target
  UnboundTypeVar,
  UnsatisfiableBranchReached,
  IndexMismatch,
  // runtime
  MatchFailure,
  FuelExhausted,
  // driver
  SyntaxError,
  IoError,
  InternalInvariantViolation,
};

std::string_view code_name(Code c);

struct SourceLoc {
  int line = 0;
  int col = 0;
};

struct Diagnostic {
  Code code;
  std::string message;
  SourceLoc loc{};

  std::string str() const;
};

class Error : public std::runtime_error {
public:
  explicit Error(Diagnostic d);
  const Diagnostic& diag() const { return diag_; }
  Code code() const { return diag_.code; }

private:
  Diagnostic diag_;
};

[[noreturn]] void fail(Code c, std::string message, SourceLoc loc = {});

// Fills in a location on errors that were raised without one.
template <class F>
auto at_loc(SourceLoc loc, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (Error& e) {
    if (e.diag().loc.line == 0 && loc.line != 0) {
      Diagnostic d = e.diag();
      d.loc = loc;
      throw Error(std::move(d));
    }
    throw;
  }
}

}  // namespace sfbox

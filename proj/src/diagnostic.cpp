#include "sfbox/diagnostic.hpp"

namespace sfbox {

std::string_view code_name(Code c) {
  switch (c) {
    case Code::UndeclaredAtom: return "UndeclaredAtom";
    case Code::DuplicateName: return "DuplicateName";
    case Code::NonAtomicTarget: return "NonAtomicTarget";
    case Code::UnboundVar: return "UnboundVar";
    case Code::ContextMismatch: return "ContextMismatch";
    case Code::NotClosed: return "NotClosed";
    case Code::SpineArity: return "SpineArity";
    case Code::TypeMismatch: return "TypeMismatch";
    case Code::LengthMismatch: return "LengthMismatch";
    case Code::EntryTypeMismatch: return "EntryTypeMismatch";
    case Code::BadShift: return "BadShift";
    case Code::LookupFailure: return "LookupFailure";
    case Code::NonLinear: return "NonLinear";
    case Code::WeakeningTooDeep: return "WeakeningTooDeep";
    case Code::ArityError: return "ArityError";
    case Code::NonAtomicContextualType: return "NonAtomicContextualType";
    case Code::CannotSynthesize: return "CannotSynthesize";
    case Code::CannotInferContext: return "CannotInferContext";
    case Code::PatternTypeMismatch: return "PatternTypeMismatch";
    case Code::UnboundContextVar: return "UnboundContextVar";
    case Code::ReservedName: return "ReservedName";
    case Code::UnreachableBranch: return "UnreachableBranch";
    case Code::UnboundTypeVar: return "UnboundTypeVar";
    case Code::UnsatisfiableBranchReached: return "UnsatisfiableBranchReached";
    case Code::IndexMismatch: return "IndexMismatch";
    case Code::MatchFailure: return "MatchFailure";
    case Code::FuelExhausted: return "FuelExhausted";
    case Code::SyntaxError: return "SyntaxError";
    case Code::IoError: return "IoError";
    case Code::InternalInvariantViolation: return "InternalInvariantViolation";
  }
  return "?";
}

std::string Diagnostic::str() const {
  std::string out;
  if (loc.line > 0) out += std::to_string(loc.line) + ":" + std::to_string(loc.col) + ": ";
  out += "error[";
  out += code_name(code);
  out += "]: ";
  out += message;
  return out;
}

Error::Error(Diagnostic d) : std::runtime_error(d.str()), diag_(std::move(d)) {}

void fail(Code c, std::string message, SourceLoc loc) {
  throw Error(Diagnostic{c, std::move(message), loc});
}

}  // namespace sfbox

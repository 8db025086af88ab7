#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sfbox/coreml/syntax.hpp"

namespace sfbox::ml {

// A typing context for checking single expressions. Context variables listed here are rigid
// and keep their names.
struct Gamma {
  std::vector<std::pair<std::string, TypePtr>> vars;  // later entries shadow earlier ones
  std::vector<std::string> ctx_vars;
};

struct Checked {
  Program program;  // elaborated: every node carries the annotations the evaluator and translator use
  std::vector<Diagnostic> warnings;
};

// Signature, data declarations and name discipline, without the definitions' bodies.
void check_declarations(const Program& p);

Checked check_program(const Program& p);

// Resolves context-variable names, checks atoms, data names and index arity.
TypePtr resolve_type(const Program& p, const std::vector<std::string>& ctx_vars, const TypePtr& t,
                     bool allow_forall = false);

ExprPtr check_expr(const Program& p, const Gamma& g, const ExprPtr& e, const TypePtr& tau,
                   std::vector<Diagnostic>* warnings = nullptr);
std::pair<ExprPtr, TypePtr> infer_expr(const Program& p, const Gamma& g, const ExprPtr& e);

}  // namespace sfbox::ml

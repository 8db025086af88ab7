#pragma once

#include <string>

#include "sfbox/sf/syntax.hpp"

namespace sfbox::sf {

// Nameless rendering: variables bound in `ctx` or by binders print as indices from the
// innermost end, remaining names print as themselves.
std::string nameless(const ErasedCtx& ctx, const TermPtr& m);

bool alpha_eq(const TermPtr& m, const TermPtr& n);
bool alpha_eq(const ContextualObject& a, const ContextualObject& b);

}  // namespace sfbox::sf

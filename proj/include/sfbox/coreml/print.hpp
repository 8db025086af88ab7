#pragma once

#include <string>

#include "sfbox/coreml/syntax.hpp"

namespace sfbox::ml {

std::string show(const TypePtr& t);
std::string show(const PatternPtr& p);
std::string show(const ExprPtr& e);
std::string show(const LitCtx& c);
std::string show_ctx_args(const std::vector<sf::Ctx>& cs);

// Surface syntax of a whole program; parses back to an equal program.
std::string show(const Program& p);

}  // namespace sfbox::ml

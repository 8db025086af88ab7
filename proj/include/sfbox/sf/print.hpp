#pragma once

#include <string>

#include "sfbox/sf/syntax.hpp"

namespace sfbox::sf {

std::string show(const TypePtr& t);
std::string show(const Ctx& c);
std::string show(const ErasedCtx& c);
std::string show(const TermPtr& m);
std::string show(const Subst& s);
std::string show(const PatternPtr& r);
std::string show(const ContextualType& u);
std::string show(const ContextualObject& c);

}  // namespace sfbox::sf

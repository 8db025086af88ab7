#pragma once

#include <functional>
#include <string>

#include "sfbox/sf/syntax.hpp"

namespace sfbox::sf {

// Smallest variant of `base` (base, base1, base2, ...) for which taken() is false.
std::string fresh_name(const std::string& base, const std::function<bool(const std::string&)>& taken);
std::string fresh_name(const std::string& base, const ErasedCtx& avoid);

Subst identity_subst();

// sigma : phi -> psi. Contexts are only consulted for names and lengths.
TermPtr apply_subst(const Subst& sigma, const ErasedCtx& phi, const ErasedCtx& psi, const TermPtr& m);
TermPtr apply_subst(const Subst& sigma, const Ctx& phi, const Ctx& psi, const TermPtr& m);

// Drops leading entries of s that map a variable of its range to itself: ^1; x over (.., x) is ^0.
Subst contract(Subst s, const ErasedCtx& range);
// m with every closure substitution contracted; apply_subst produces this form.
TermPtr canonical(const ErasedCtx& psi, const TermPtr& m);

// sigma : mid -> psi, inner : dom -> mid; result : dom -> psi.
Subst compose_subst(const Subst& sigma, const ErasedCtx& mid, const ErasedCtx& psi, const Subst& inner);

TermPtr lookup_var(const std::string& x, const Subst& sigma, const ErasedCtx& phi, const ErasedCtx& psi);

// Positional renaming of a term from one erased context to another of the same length.
TermPtr rename_ctx(const ErasedCtx& from, const ErasedCtx& to, const TermPtr& m);

}  // namespace sfbox::sf

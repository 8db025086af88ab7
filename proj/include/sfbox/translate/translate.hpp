#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sfbox/coreml/eval.hpp"
#include "sfbox/coreml/syntax.hpp"
#include "sfbox/sf/syntax.hpp"
#include "sfbox/target/check.hpp"
#include "sfbox/target/eval.hpp"
#include "sfbox/target/syntax.hpp"

namespace sfbox::translate {

namespace T = sfbox::target;

T::TypePtr trans_sf_type(const sf::TypePtr& a);
T::TypePtr trans_sf_ctx(const sf::Ctx& psi);
T::TypePtr trans_type(const ml::TypePtr& t);
T::Signature trans_signature(const ml::Program& p);

// What is in scope at a point of the source program.
struct TranslationContext {
  std::map<std::string, ml::TypePtr> ml_vars;  // as the source checker typed them
  std::vector<std::string> ctx_vars;           // context variables, including pattern-bound ones
  std::vector<std::pair<sf::Ctx, sf::Ctx>> refinements;  // index equalities from enclosing patterns
};

// In Psi = (y:tm, x:tm): x is Var(Top), y is Var(Pop Top). m must be checked at psi |- a.
T::ExprPtr trans_sf_term(const sf::Signature& sig, const TranslationContext& tc, const sf::TermPtr& m, const sf::Ctx& psi,
                         const sf::TypePtr& a);
// sigma : phi -> psi, elaborated by the checker; the result has type sub([[psi]], [[phi]]).
T::ExprPtr trans_sf_subst(const sf::Signature& sig, const TranslationContext& tc, const sf::Subst& sigma, const sf::Ctx& phi,
                          const sf::Ctx& psi);

struct PatternImage {
  T::PatternPtr pattern;
  std::vector<std::pair<std::string, T::TypePtr>> bindings;
};
// Index positions become fresh pattern type variables.
PatternImage trans_sf_pattern(const sf::Signature& sig, const sf::PatternPtr& r, const sf::Ctx& psi, const sf::TypePtr& a);

// A target judgement the translation claims to hold, re-checked by verify_preservation.
struct Obligation {
  enum class Kind { Term, Subst, Pattern, CtxPattern };
  Kind kind;
  std::string decl;
  std::string what;  // the source phrase
  std::vector<std::string> vars;
  std::vector<std::pair<T::TypePtr, T::TypePtr>> equalities;
  T::BindingsPtr gamma;
  T::ExprPtr expr;                                              // Term, Subst
  T::PatternPtr pattern;                                        // Pattern, CtxPattern
  T::TypePtr type;
  std::vector<std::pair<std::string, T::TypePtr>> bindings;     // Pattern, CtxPattern: expected images
};

struct Translation {
  T::Program program;
  std::vector<Obligation> obligations;
};

// `p` must be the output of the source checker.
Translation trans_program(const ml::Program& p);

// Source values into target values; function values are not supported.
T::ValuePtr trans_value(const ml::Program& p, const ml::ValuePtr& v, const ml::TypePtr& t);
T::ValuePtr embed_object(const sf::ContextualObject& obj);

}  // namespace sfbox::translate

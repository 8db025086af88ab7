#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sfbox/coreml/syntax.hpp"
#include "sfbox/fuel.hpp"

namespace sfbox::ml {

struct Value;
using ValuePtr = std::shared_ptr<const Value>;
struct Env;
using EnvPtr = std::shared_ptr<const Env>;

struct Value {
  enum class Kind { Data, Fun, Ctx };
  Kind kind;
  std::string name;             // Data: constructor
  std::vector<ValuePtr> args;   // Data
  std::vector<sf::ErasedCtx> ctxs;  // Data: the constructor's contexts; Fun: once instantiated
  bool instantiated = false;    // Fun
  ExprPtr fun;                  // Fun: the elaborated Fun expression
  EnvPtr env;                   // Fun
  sf::ContextualObject obj;     // Ctx
};

ValuePtr data_value(std::string k, std::vector<ValuePtr> args = {}, std::vector<sf::ErasedCtx> ctxs = {});
ValuePtr ctx_value(sf::ContextualObject obj);

// Persistent environment: ML variables map to values, context variables to the runtime
// names of the entries they stand for.
struct Env {
  std::string name;
  ValuePtr value;
  std::optional<sf::ErasedCtx> ctx;
  EnvPtr next;
};

EnvPtr bind_value(EnvPtr env, std::string x, ValuePtr v);
EnvPtr bind_ctx(EnvPtr env, std::string g, sf::ErasedCtx names);
ValuePtr lookup_value(const EnvPtr& env, const std::string& x);

using sfbox::Fuel;

// `e` must be elaborated by the checker.
ValuePtr eval(const Program& p, const EnvPtr& env, const ExprPtr& e, Fuel& fuel);

// Evaluates the definitions of a checked program in order.
EnvPtr eval_defs(const Program& p, Fuel& fuel);
ValuePtr run_main(const Program& p, Fuel& fuel);

// First-order matching of an ML pattern; context variables the pattern introduces are bound too.
std::optional<EnvPtr> match_ml(const PatternPtr& pat, const ValuePtr& v, const EnvPtr& env);

std::string show(const ValuePtr& v);
bool value_equal(const ValuePtr& a, const ValuePtr& b);  // contextual objects up to renaming

// Whether a value has a closed first-order type; function values are accepted at arrow types.
bool check_value(const Program& p, const ValuePtr& v, const TypePtr& t);

}  // namespace sfbox::ml

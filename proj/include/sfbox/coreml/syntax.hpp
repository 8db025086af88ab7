#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sfbox/diagnostic.hpp"
#include "sfbox/sf/syntax.hpp"

namespace sfbox::ml {

struct Type;
using TypePtr = std::shared_ptr<const Type>;

struct Type {
  enum class Kind { Data, Arrow, Ctx, Param, Forall };
  Kind kind;
  std::string name;               // Data
  std::vector<sf::Ctx> indices;   // Data
  TypePtr dom, cod;               // Arrow
  sf::ContextualType ctype;       // Ctx, Param
  std::vector<std::string> vars;  // Forall: context variables
  TypePtr body;                   // Forall
};

TypePtr data_type(std::string name, std::vector<sf::Ctx> indices = {});
TypePtr arrow(TypePtr a, TypePtr b);
TypePtr ctx_type(sf::ContextualType u);
TypePtr param_type(sf::ContextualType u);
TypePtr forall(std::vector<std::string> vars, TypePtr body);

// Types compare with contexts taken positionally and Forall up to renaming.
bool type_equal(const TypePtr& a, const TypePtr& b);

// Substitution for context variables (and unification metavariables, written ?n).
using CtxSubst = std::map<std::string, sf::Ctx>;

// subst_* chase solutions that mention other solved variables. inst_* apply s once,
// simultaneously, as when instantiating a binder: {g} with g := g, x:tm is fine.
sf::Ctx subst_ctx(const CtxSubst& s, const sf::Ctx& c);
TypePtr subst_type(const CtxSubst& s, const TypePtr& t);
sf::Ctx inst_ctx(const CtxSubst& s, const sf::Ctx& c);
TypePtr inst_type(const CtxSubst& s, const TypePtr& t);
void ctx_vars_of(const TypePtr& t, std::vector<std::string>& out);
bool has_meta(const TypePtr& t);
inline bool is_meta(const std::string& v) { return !v.empty() && v[0] == '?'; }

// First-order unification of contexts: strips common innermost entries, then binds a bare
// variable for which `bindable` holds. The left side is preferred for binding.
using Bindable = std::function<bool(const std::string&)>;
bool unify_ctx(const sf::Ctx& a, const sf::Ctx& b, CtxSubst& s, const Bindable& bindable);
bool unify_type(const TypePtr& a, const TypePtr& b, CtxSubst& s, const Bindable& bindable);

struct Pattern;
using PatternPtr = std::shared_ptr<const Pattern>;

struct Pattern {
  enum class Kind { Var, Con };
  Kind kind;
  std::string name;
  std::vector<PatternPtr> args;          // Con
  std::vector<std::string> ctx_binders;  // Con, as written: K{g; d}
  SourceLoc loc{};

  // filled in by the checker
  TypePtr type;                          // Var
  std::vector<std::string> ctx_params;   // Con: context variables the match introduces
  std::vector<sf::Ctx> scrut_indices;    // Con: index contexts of the scrutinee's type
  std::vector<sf::Ctx> con_indices;      // Con: declared result indices over ctx_params
};

PatternPtr pvar(std::string x, SourceLoc loc = {});
PatternPtr pcon(std::string k, std::vector<PatternPtr> args, std::vector<std::string> ctx_binders = {},
                SourceLoc loc = {});

// The erased context written in a literal or branch: [x, y |- ...], [_, x |- ...], [...].
struct LitCtx {
  std::vector<std::string> names;
  std::vector<std::string> atoms;  // per name; "" when not annotated
  bool turnstile = false;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Branch {
  PatternPtr pattern;
  ExprPtr body;
};

struct CBranch {
  LitCtx ctx;
  sf::PatternPtr pattern;
  ExprPtr body;
  SourceLoc loc{};

  // filled in by the checker
  sf::ContextualType at;  // pattern context with the branch's names
  std::vector<TypePtr> binder_types;
  std::vector<std::string> binder_names;
};

struct Expr {
  enum class Kind { Fun, Let, Match, CMatch, CtxObj, App, ConApp, Var, Ann, Inst };
  Kind kind;
  SourceLoc loc{};
  std::string name;   // Fun: f, Let: x, Var, ConApp: constructor
  std::string param;  // Fun: x
  ExprPtr fn;         // App, Ann, Inst
  ExprPtr arg;        // App, Let scrutinee, Match/CMatch scrutinee
  ExprPtr body;       // Fun, Let
  std::vector<ExprPtr> args;  // ConApp
  std::vector<Branch> branches;
  std::vector<CBranch> cbranches;
  LitCtx lit;          // CtxObj
  sf::TermPtr term;    // CtxObj
  TypePtr type;        // Ann; after checking also Fun, Let (bound type), CtxObj
  std::vector<sf::Ctx> ctxs;  // Inst, ConApp
  bool explicit_ctxs = false;
  std::vector<std::string> ctx_params;  // Fun, after checking

  bool neutral() const {
    return kind == Kind::App || kind == Kind::ConApp || kind == Kind::Var || kind == Kind::Ann ||
           kind == Kind::Inst;
  }
};

ExprPtr fun(std::string f, std::string x, ExprPtr body, SourceLoc loc = {});
ExprPtr let(std::string x, ExprPtr i, ExprPtr body, SourceLoc loc = {});
ExprPtr match(ExprPtr i, std::vector<Branch> bs, SourceLoc loc = {});
ExprPtr cmatch(ExprPtr i, std::vector<CBranch> bs, SourceLoc loc = {});
ExprPtr ctx_obj(LitCtx lit, sf::TermPtr m, SourceLoc loc = {});
ExprPtr app(ExprPtr f, ExprPtr a, SourceLoc loc = {});
ExprPtr con_app(std::string k, std::vector<ExprPtr> args, std::vector<sf::Ctx> ctxs = {}, bool explicit_ctxs = false,
                SourceLoc loc = {});
ExprPtr var(std::string x, SourceLoc loc = {});
ExprPtr ann(ExprPtr e, TypePtr t, SourceLoc loc = {});
ExprPtr inst(ExprPtr f, std::vector<sf::Ctx> ctxs, SourceLoc loc = {});

struct DataCon {
  std::string name;
  std::vector<std::string> ctx_params;
  std::vector<TypePtr> args;
  std::vector<sf::Ctx> indices;  // result indices, over ctx_params
  SourceLoc loc{};
};

struct DataDecl {
  std::string name;
  std::size_t arity = 0;  // number of context indices
  std::vector<DataCon> cons;
  SourceLoc loc{};
};

struct Def {
  std::string name;
  TypePtr type;
  ExprPtr body;
  SourceLoc loc{};
};

struct Program {
  sf::Signature sf;
  std::vector<DataDecl> data;
  std::vector<Def> defs;
  std::optional<std::string> main;

  const DataDecl* find_data(const std::string& d) const;
  // The constructor and the data type declaring it.
  std::pair<const DataCon*, const DataDecl*> find_con(const std::string& k) const;
  const Def* find_def(const std::string& name) const;
};

// Names used by the deep embedding of SF in the target; user declarations may not reuse them.
const std::vector<std::string>& reserved_names();

}  // namespace sfbox::ml

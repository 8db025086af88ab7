#include "sfbox/driver/dump.hpp"

#include "sfbox/diagnostic.hpp"

namespace sfbox::driver {

namespace {

Json node(const char* kind) {
  Json j;
  j["kind"] = kind;
  return j;
}

const std::string& kind_of(const Json& j) { return j.at("kind").get_ref<const std::string&>(); }

[[noreturn]] void bad(const std::string& what, const Json& j) {
  fail(Code::SyntaxError, "unexpected " + what + " node: " + j.dump());
}

// SF

Json dump(const sf::TypePtr& t) {
  switch (t->kind) {
    case sf::Type::Kind::Atom: {
      auto j = node("atom");
      j["name"] = t->atom;
      return j;
    }
    case sf::Type::Kind::Arrow: {
      auto j = node("arrow");
      j["dom"] = dump(t->arg);
      j["cod"] = dump(t->res);
      return j;
    }
    case sf::Type::Kind::Box: {
      auto j = node("box");
      j["body"] = dump(t->arg);
      return j;
    }
  }
  return nullptr;
}

sf::TypePtr load_sf_type(const Json& j) {
  const auto& k = kind_of(j);
  if (k == "atom") return sf::atom(j.at("name"));
  if (k == "arrow") return sf::arrow(load_sf_type(j.at("dom")), load_sf_type(j.at("cod")));
  if (k == "box") return sf::boxed(load_sf_type(j.at("body")));
  bad("SF type", j);
}

Json dump(const sf::Ctx& c) {
  auto j = node("ctx");
  j["var"] = c.var ? Json(*c.var) : Json(nullptr);
  j["entries"] = Json::array();
  for (const auto& e : c.entries) j["entries"].push_back(Json::array({e.name, e.atom}));
  return j;
}

sf::Ctx load_ctx(const Json& j) {
  if (kind_of(j) != "ctx") bad("context", j);
  sf::Ctx c;
  if (!j.at("var").is_null()) c.var = j.at("var").get<std::string>();
  for (const auto& e : j.at("entries")) c.entries.push_back({e.at(0), e.at(1)});
  return c;
}

Json dump(const sf::TermPtr& m);

Json dump(const sf::Subst& s) {
  auto j = node("subst");
  j["shift"] = s.shift;
  j["elided"] = s.elided;
  j["entries"] = Json::array();
  for (const auto& e : s.entries) j["entries"].push_back(dump(e));
  return j;
}

Json dump(const sf::TermPtr& m) {
  switch (m->kind) {
    case sf::Term::Kind::Const: {
      auto j = node("const");
      j["name"] = m->name;
      j["args"] = Json::array();
      for (const auto& a : m->args) j["args"].push_back(dump(a));
      return j;
    }
    case sf::Term::Kind::Lam: {
      auto j = node("lam");
      j["name"] = m->name;
      j["body"] = dump(m->body);
      return j;
    }
    case sf::Term::Kind::Box: {
      auto j = node("box");
      j["body"] = dump(m->body);
      return j;
    }
    case sf::Term::Kind::BVar: {
      auto j = node("bvar");
      j["name"] = m->name;
      return j;
    }
    case sf::Term::Kind::QVar: {
      auto j = node("qvar");
      j["name"] = m->name;
      return j;
    }
    case sf::Term::Kind::PVar: {
      auto j = node("pvar");
      j["name"] = m->name;
      j["weakening"] = m->weakening;
      return j;
    }
    case sf::Term::Kind::Clo: {
      auto j = node("clo");
      j["body"] = dump(m->body);
      j["subst"] = dump(m->subst);
      return j;
    }
  }
  return nullptr;
}

sf::TermPtr load_term(const Json& j) {
  const auto& k = kind_of(j);
  if (k == "const") {
    std::vector<sf::TermPtr> args;
    for (const auto& a : j.at("args")) args.push_back(load_term(a));
    return sf::const_app(j.at("name"), std::move(args));
  }
  if (k == "lam") return sf::lam(j.at("name"), load_term(j.at("body")));
  if (k == "box") return sf::box(load_term(j.at("body")));
  if (k == "bvar") return sf::bvar(j.at("name"));
  if (k == "qvar") return sf::qvar(j.at("name"));
  if (k == "pvar") return sf::pvar(j.at("name"), j.at("weakening").get<unsigned>());
  if (k == "clo") {
    const auto& s = j.at("subst");
    sf::Subst sigma;
    sigma.shift = s.at("shift");
    sigma.elided = s.at("elided");
    for (const auto& e : s.at("entries")) sigma.entries.push_back(load_term(e));
    return sf::clo(load_term(j.at("body")), std::move(sigma));
  }
  bad("SF term", j);
}

Json dump(const sf::PatternPtr& r) {
  switch (r->kind) {
    case sf::Pattern::Kind::Lam: {
      auto j = node("lam");
      j["name"] = r->name;
      j["body"] = dump(r->body);
      return j;
    }
    case sf::Pattern::Kind::Box: {
      auto j = node("box");
      j["body"] = dump(r->body);
      return j;
    }
    case sf::Pattern::Kind::BVar: {
      auto j = node("bvar");
      j["name"] = r->name;
      return j;
    }
    case sf::Pattern::Kind::Const: {
      auto j = node("const");
      j["name"] = r->name;
      j["args"] = Json::array();
      for (const auto& a : r->args) j["args"].push_back(dump(a));
      return j;
    }
    case sf::Pattern::Kind::QVar: {
      auto j = node("qvar");
      j["name"] = r->name;
      return j;
    }
    case sf::Pattern::Kind::PVar: {
      auto j = node("pvar");
      j["name"] = r->name;
      j["weakening"] = r->weakening;
      return j;
    }
  }
  return nullptr;
}

sf::PatternPtr load_sf_pattern(const Json& j) {
  const auto& k = kind_of(j);
  if (k == "lam") return sf::plam(j.at("name"), load_sf_pattern(j.at("body")));
  if (k == "box") return sf::pbox(load_sf_pattern(j.at("body")));
  if (k == "bvar") return sf::pbvar(j.at("name"));
  if (k == "const") {
    std::vector<sf::PatternPtr> args;
    for (const auto& a : j.at("args")) args.push_back(load_sf_pattern(a));
    return sf::pconst(j.at("name"), std::move(args));
  }
  if (k == "qvar") return sf::pqvar(j.at("name"));
  if (k == "pvar") return sf::ppvar(j.at("name"), j.at("weakening").get<unsigned>());
  bad("SF pattern", j);
}

// Core-ML

Json dump_ctxs(const std::vector<sf::Ctx>& cs) {
  auto a = Json::array();
  for (const auto& c : cs) a.push_back(dump(c));
  return a;
}

std::vector<sf::Ctx> load_ctxs(const Json& j) {
  std::vector<sf::Ctx> out;
  for (const auto& c : j) out.push_back(load_ctx(c));
  return out;
}

Json dump(const ml::TypePtr& t) {
  switch (t->kind) {
    case ml::Type::Kind::Data: {
      auto j = node("data");
      j["name"] = t->name;
      j["indices"] = dump_ctxs(t->indices);
      return j;
    }
    case ml::Type::Kind::Arrow: {
      auto j = node("arrow");
      j["dom"] = dump(t->dom);
      j["cod"] = dump(t->cod);
      return j;
    }
    case ml::Type::Kind::Ctx:
    case ml::Type::Kind::Param: {
      auto j = node(t->kind == ml::Type::Kind::Ctx ? "contextual" : "param");
      j["ctx"] = dump(t->ctype.ctx);
      j["atom"] = t->ctype.atom;
      return j;
    }
    case ml::Type::Kind::Forall: {
      auto j = node("forall");
      j["vars"] = t->vars;
      j["body"] = dump(t->body);
      return j;
    }
  }
  return nullptr;
}

ml::TypePtr load_ml_type(const Json& j) {
  const auto& k = kind_of(j);
  if (k == "data") return ml::data_type(j.at("name"), load_ctxs(j.at("indices")));
  if (k == "arrow") return ml::arrow(load_ml_type(j.at("dom")), load_ml_type(j.at("cod")));
  if (k == "contextual") return ml::ctx_type({load_ctx(j.at("ctx")), j.at("atom")});
  if (k == "param") return ml::param_type({load_ctx(j.at("ctx")), j.at("atom")});
  if (k == "forall") return ml::forall(j.at("vars").get<std::vector<std::string>>(), load_ml_type(j.at("body")));
  bad("ML type", j);
}

Json dump(const ml::PatternPtr& p) {
  if (p->kind == ml::Pattern::Kind::Var) {
    auto j = node("var");
    j["name"] = p->name;
    return j;
  }
  auto j = node("con");
  j["name"] = p->name;
  j["ctx_binders"] = p->ctx_binders;
  j["args"] = Json::array();
  for (const auto& a : p->args) j["args"].push_back(dump(a));
  return j;
}

ml::PatternPtr load_ml_pattern(const Json& j) {
  const auto& k = kind_of(j);
  if (k == "var") return ml::pvar(j.at("name"));
  if (k == "con") {
    std::vector<ml::PatternPtr> args;
    for (const auto& a : j.at("args")) args.push_back(load_ml_pattern(a));
    return ml::pcon(j.at("name"), std::move(args), j.at("ctx_binders").get<std::vector<std::string>>());
  }
  bad("ML pattern", j);
}

Json dump(const ml::LitCtx& c) {
  auto j = node("lit_ctx");
  j["names"] = c.names;
  j["atoms"] = c.atoms;
  j["turnstile"] = c.turnstile;
  return j;
}

ml::LitCtx load_lit(const Json& j) {
  if (kind_of(j) != "lit_ctx") bad("literal context", j);
  ml::LitCtx c;
  c.names = j.at("names").get<std::vector<std::string>>();
  c.atoms = j.at("atoms").get<std::vector<std::string>>();
  c.turnstile = j.at("turnstile");
  return c;
}

Json dump(const ml::ExprPtr& e) {
  using K = ml::Expr::Kind;
  switch (e->kind) {
    case K::Fun: {
      auto j = node("fun");
      j["name"] = e->name;
      j["param"] = e->param;
      j["body"] = dump(e->body);
      return j;
    }
    case K::Let: {
      auto j = node("let");
      j["name"] = e->name;
      j["bound"] = dump(e->arg);
      j["body"] = dump(e->body);
      return j;
    }
    case K::Match: {
      auto j = node("match");
      j["scrutinee"] = dump(e->arg);
      j["branches"] = Json::array();
      for (const auto& b : e->branches) {
        auto bj = node("branch");
        bj["pattern"] = dump(b.pattern);
        bj["body"] = dump(b.body);
        j["branches"].push_back(std::move(bj));
      }
      return j;
    }
    case K::CMatch: {
      auto j = node("cmatch");
      j["scrutinee"] = dump(e->arg);
      j["branches"] = Json::array();
      for (const auto& b : e->cbranches) {
        auto bj = node("cbranch");
        bj["ctx"] = dump(b.ctx);
        bj["pattern"] = dump(b.pattern);
        bj["body"] = dump(b.body);
        j["branches"].push_back(std::move(bj));
      }
      return j;
    }
    case K::CtxObj: {
      auto j = node("ctx_obj");
      j["ctx"] = dump(e->lit);
      j["term"] = dump(e->term);
      return j;
    }
    case K::App: {
      auto j = node("app");
      j["fn"] = dump(e->fn);
      j["arg"] = dump(e->arg);
      return j;
    }
    case K::ConApp: {
      auto j = node("con_app");
      j["name"] = e->name;
      j["explicit_ctxs"] = e->explicit_ctxs;
      j["ctxs"] = e->explicit_ctxs ? dump_ctxs(e->ctxs) : Json::array();
      j["args"] = Json::array();
      for (const auto& a : e->args) j["args"].push_back(dump(a));
      return j;
    }
    case K::Var: {
      auto j = node("var");
      j["name"] = e->name;
      return j;
    }
    case K::Ann: {
      auto j = node("ann");
      j["expr"] = dump(e->fn);
      j["type"] = dump(e->type);
      return j;
    }
    case K::Inst: {
      auto j = node("inst");
      j["fn"] = dump(e->fn);
      j["ctxs"] = dump_ctxs(e->ctxs);
      return j;
    }
  }
  return nullptr;
}

ml::ExprPtr load_expr(const Json& j) {
  const auto& k = kind_of(j);
  if (k == "fun") return ml::fun(j.at("name"), j.at("param"), load_expr(j.at("body")));
  if (k == "let") return ml::let(j.at("name"), load_expr(j.at("bound")), load_expr(j.at("body")));
  if (k == "match") {
    std::vector<ml::Branch> bs;
    for (const auto& b : j.at("branches")) bs.push_back({load_ml_pattern(b.at("pattern")), load_expr(b.at("body"))});
    return ml::match(load_expr(j.at("scrutinee")), std::move(bs));
  }
  if (k == "cmatch") {
    std::vector<ml::CBranch> bs;
    for (const auto& b : j.at("branches")) {
      ml::CBranch cb;
      cb.ctx = load_lit(b.at("ctx"));
      cb.pattern = load_sf_pattern(b.at("pattern"));
      cb.body = load_expr(b.at("body"));
      bs.push_back(std::move(cb));
    }
    return ml::cmatch(load_expr(j.at("scrutinee")), std::move(bs));
  }
  if (k == "ctx_obj") return ml::ctx_obj(load_lit(j.at("ctx")), load_term(j.at("term")));
  if (k == "app") return ml::app(load_expr(j.at("fn")), load_expr(j.at("arg")));
  if (k == "con_app") {
    std::vector<ml::ExprPtr> args;
    for (const auto& a : j.at("args")) args.push_back(load_expr(a));
    return ml::con_app(j.at("name"), std::move(args), load_ctxs(j.at("ctxs")), j.at("explicit_ctxs"));
  }
  if (k == "var") return ml::var(j.at("name"));
  if (k == "ann") return ml::ann(load_expr(j.at("expr")), load_ml_type(j.at("type")));
  if (k == "inst") return ml::inst(load_expr(j.at("fn")), load_ctxs(j.at("ctxs")));
  bad("ML expression", j);
}

// Target

Json dump(const target::TypePtr& t) {
  using K = target::Type::Kind;
  switch (t->kind) {
    case K::Data: {
      auto j = node("data");
      j["name"] = t->name;
      j["args"] = Json::array();
      for (const auto& a : t->args) j["args"].push_back(dump(a));
      return j;
    }
    case K::Forall: {
      auto j = node("forall");
      j["var"] = t->name;
      j["body"] = dump(t->args[0]);
      return j;
    }
    case K::Arrow:
    case K::Prod: {
      auto j = node(t->kind == K::Arrow ? "arrow" : "prod");
      j["left"] = dump(t->args[0]);
      j["right"] = dump(t->args[1]);
      return j;
    }
    case K::Var: {
      auto j = node("var");
      j["name"] = t->name;
      return j;
    }
  }
  return nullptr;
}

target::TypePtr load_target_type(const Json& j) {
  const auto& k = kind_of(j);
  if (k == "data") {
    std::vector<target::TypePtr> args;
    for (const auto& a : j.at("args")) args.push_back(load_target_type(a));
    return target::tdata(j.at("name"), std::move(args));
  }
  if (k == "forall") return target::tforall(j.at("var").get<std::string>(), load_target_type(j.at("body")));
  if (k == "arrow") return target::tarrow(load_target_type(j.at("left")), load_target_type(j.at("right")));
  if (k == "prod") return target::tprod(load_target_type(j.at("left")), load_target_type(j.at("right")));
  if (k == "var") return target::tvar(j.at("name"));
  bad("target type", j);
}

Json dump_opt(const target::TypePtr& t) { return t ? dump(t) : Json(nullptr); }
target::TypePtr load_opt_type(const Json& j) { return j.is_null() ? nullptr : load_target_type(j); }

Json dump(const target::PatternPtr& p) {
  using K = target::Pattern::Kind;
  switch (p->kind) {
    case K::Var: {
      auto j = node("var");
      j["name"] = p->name;
      return j;
    }
    case K::Con: {
      auto j = node("con");
      j["name"] = p->name;
      j["tvars"] = p->tvars;
      j["arg"] = p->a ? dump(p->a) : Json(nullptr);
      return j;
    }
    case K::Pair: {
      auto j = node("pair");
      j["left"] = dump(p->a);
      j["right"] = dump(p->b);
      return j;
    }
  }
  return nullptr;
}

target::PatternPtr load_target_pattern(const Json& j) {
  const auto& k = kind_of(j);
  if (k == "var") return target::pvar(j.at("name"));
  if (k == "con") {
    const auto& a = j.at("arg");
    return target::pcon(j.at("name"), j.at("tvars").get<std::vector<std::string>>(),
                        a.is_null() ? nullptr : load_target_pattern(a));
  }
  if (k == "pair") return target::ppair(load_target_pattern(j.at("left")), load_target_pattern(j.at("right")));
  bad("target pattern", j);
}

Json dump(const target::ExprPtr& e) {
  using K = target::Expr::Kind;
  switch (e->kind) {
    case K::Var: {
      auto j = node("var");
      j["name"] = e->name;
      return j;
    }
    case K::Con: {
      auto j = node("con");
      j["name"] = e->name;
      j["types"] = Json::array();
      for (const auto& t : e->types) j["types"].push_back(dump(t));
      j["arg"] = e->a ? dump(e->a) : Json(nullptr);
      return j;
    }
    case K::Fix: {
      auto j = node("fix");
      j["name"] = e->name;
      j["type"] = dump(e->type);
      j["body"] = dump(e->a);
      return j;
    }
    case K::App: {
      auto j = node("app");
      j["fn"] = dump(e->a);
      j["arg"] = dump(e->b);
      return j;
    }
    case K::Pair: {
      auto j = node("pair");
      j["left"] = dump(e->a);
      j["right"] = dump(e->b);
      return j;
    }
    case K::Lam: {
      auto j = node("lam");
      j["name"] = e->name;
      j["type"] = dump_opt(e->type);
      j["body"] = dump(e->a);
      return j;
    }
    case K::Let: {
      auto j = node("let");
      j["name"] = e->name;
      j["type"] = dump_opt(e->type);
      j["bound"] = dump(e->a);
      j["body"] = dump(e->b);
      return j;
    }
    case K::Match: {
      auto j = node("match");
      j["scrutinee"] = dump(e->a);
      j["branches"] = Json::array();
      for (const auto& b : e->branches) {
        auto bj = node("branch");
        bj["pattern"] = dump(b.pat);
        bj["body"] = dump(b.body);
        j["branches"].push_back(std::move(bj));
      }
      return j;
    }
    case K::TyLam: {
      auto j = node("tylam");
      j["var"] = e->name;
      j["body"] = dump(e->a);
      return j;
    }
    case K::TyApp: {
      auto j = node("tyapp");
      j["fn"] = dump(e->a);
      j["type"] = dump(e->type);
      return j;
    }
  }
  return nullptr;
}

target::ExprPtr load_target_expr(const Json& j) {
  const auto& k = kind_of(j);
  auto sub = [&](const char* key) { return load_target_expr(j.at(key)); };
  if (k == "var") return target::var(j.at("name"));
  if (k == "con") {
    std::vector<target::TypePtr> ts;
    for (const auto& t : j.at("types")) ts.push_back(load_target_type(t));
    const auto& a = j.at("arg");
    return target::con(j.at("name"), std::move(ts), a.is_null() ? nullptr : load_target_expr(a));
  }
  if (k == "fix") return target::fix(j.at("name"), load_target_type(j.at("type")), sub("body"));
  if (k == "app") return target::app(sub("fn"), sub("arg"));
  if (k == "pair") return target::pair(sub("left"), sub("right"));
  if (k == "lam") return target::lam(j.at("name"), load_opt_type(j.at("type")), sub("body"));
  if (k == "let") return target::let(j.at("name"), load_opt_type(j.at("type")), sub("bound"), sub("body"));
  if (k == "match") {
    std::vector<target::Branch> bs;
    for (const auto& b : j.at("branches"))
      bs.push_back({load_target_pattern(b.at("pattern")), load_target_expr(b.at("body"))});
    return target::match(sub("scrutinee"), std::move(bs));
  }
  if (k == "tylam") return target::tylam(j.at("var"), sub("body"));
  if (k == "tyapp") return target::tyapp(sub("fn"), load_target_type(j.at("type")));
  bad("target expression", j);
}

void check_header(const Json& j, const char* kind) {
  if (!j.is_object() || !j.contains("schema") || j.at("schema") != kSchemaVersion)
    fail(Code::SyntaxError, "unsupported or missing schema version");
  if (kind_of(j) != kind) fail(Code::SyntaxError, std::string("expected a ") + kind + " dump");
}

template <class F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Json::exception& e) {
    fail(Code::SyntaxError, std::string("malformed JSON dump: ") + e.what());
  }
}

}  // namespace

Json dump(const ml::Program& p) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["kind"] = "source_program";
  auto sig = node("sf_signature");
  sig["atoms"] = p.sf.atoms;
  sig["constructors"] = Json::array();
  for (const auto& [c, t] : p.sf.constructors) {
    auto cj = node("sf_constructor");
    cj["name"] = c;
    cj["type"] = dump(t);
    sig["constructors"].push_back(std::move(cj));
  }
  j["spec"] = std::move(sig);
  j["data"] = Json::array();
  for (const auto& d : p.data) {
    auto dj = node("data_decl");
    dj["name"] = d.name;
    dj["arity"] = d.arity;
    dj["constructors"] = Json::array();
    for (const auto& k : d.cons) {
      auto kj = node("data_con");
      kj["name"] = k.name;
      kj["ctx_params"] = k.ctx_params;
      kj["args"] = Json::array();
      for (const auto& a : k.args) kj["args"].push_back(dump(a));
      kj["indices"] = dump_ctxs(k.indices);
      dj["constructors"].push_back(std::move(kj));
    }
    j["data"].push_back(std::move(dj));
  }
  j["defs"] = Json::array();
  for (const auto& d : p.defs) {
    auto dj = node("def");
    dj["name"] = d.name;
    dj["type"] = dump(d.type);
    dj["body"] = dump(d.body);
    j["defs"].push_back(std::move(dj));
  }
  j["main"] = p.main ? Json(*p.main) : Json(nullptr);
  return j;
}

ml::Program load_source(const Json& j) {
  return guarded([&] {
    check_header(j, "source_program");
    ml::Program p;
    const auto& sig = j.at("spec");
    p.sf.atoms = sig.at("atoms").get<std::vector<std::string>>();
    for (const auto& c : sig.at("constructors")) p.sf.constructors.push_back({c.at("name"), load_sf_type(c.at("type"))});
    for (const auto& dj : j.at("data")) {
      ml::DataDecl d;
      d.name = dj.at("name");
      d.arity = dj.at("arity");
      for (const auto& kj : dj.at("constructors")) {
        ml::DataCon k;
        k.name = kj.at("name");
        k.ctx_params = kj.at("ctx_params").get<std::vector<std::string>>();
        for (const auto& a : kj.at("args")) k.args.push_back(load_ml_type(a));
        k.indices = load_ctxs(kj.at("indices"));
        d.cons.push_back(std::move(k));
      }
      p.data.push_back(std::move(d));
    }
    for (const auto& dj : j.at("defs"))
      p.defs.push_back({dj.at("name"), load_ml_type(dj.at("type")), load_expr(dj.at("body")), {}});
    if (!j.at("main").is_null()) p.main = j.at("main").get<std::string>();
    return p;
  });
}

Json dump(const target::Program& p) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["kind"] = "target_program";
  auto sig = node("target_signature");
  sig["types"] = Json::array();
  for (const auto& [d, n] : p.sig.types) {
    auto tj = node("type_former");
    tj["name"] = d;
    tj["arity"] = n;
    sig["types"].push_back(std::move(tj));
  }
  sig["constructors"] = Json::array();
  for (const auto& c : p.sig.cons) {
    auto cj = node("target_constructor");
    cj["name"] = c.name;
    cj["vars"] = c.vars;
    cj["arg"] = dump_opt(c.arg);
    cj["data"] = c.data;
    cj["indices"] = Json::array();
    for (const auto& t : c.indices) cj["indices"].push_back(dump(t));
    sig["constructors"].push_back(std::move(cj));
  }
  j["signature"] = std::move(sig);
  j["defs"] = Json::array();
  for (const auto& d : p.defs) {
    auto dj = node("def");
    dj["name"] = d.name;
    dj["type"] = dump(d.type);
    dj["body"] = dump(d.body);
    j["defs"].push_back(std::move(dj));
  }
  j["main"] = p.main ? Json(*p.main) : Json(nullptr);
  return j;
}

target::Program load_target(const Json& j) {
  return guarded([&] {
    check_header(j, "target_program");
    target::Program p;
    const auto& sig = j.at("signature");
    for (const auto& t : sig.at("types")) p.sig.types.push_back({t.at("name"), t.at("arity")});
    for (const auto& c : sig.at("constructors")) {
      target::ConSig k;
      k.name = c.at("name");
      k.vars = c.at("vars").get<std::vector<std::string>>();
      k.arg = load_opt_type(c.at("arg"));
      k.data = c.at("data");
      for (const auto& t : c.at("indices")) k.indices.push_back(load_target_type(t));
      p.sig.cons.push_back(std::move(k));
    }
    for (const auto& dj : j.at("defs"))
      p.defs.push_back({dj.at("name"), load_target_type(dj.at("type")), load_target_expr(dj.at("body"))});
    if (!j.at("main").is_null()) p.main = j.at("main").get<std::string>();
    return p;
  });
}

}  // namespace sfbox::driver

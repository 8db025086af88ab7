#include "sfbox/coreml/print.hpp"

#include "sfbox/sf/print.hpp"

namespace sfbox::ml {

namespace {

std::string show_type(const TypePtr& t, bool left) {
  switch (t->kind) {
    case Type::Kind::Data:
      if (t->indices.empty()) return t->name;
      return t->name + "(" + show_ctx_args(t->indices) + ")";
    case Type::Kind::Ctx: return "[" + sf::show(t->ctype.ctx) + " |- " + t->ctype.atom + "]";
    case Type::Kind::Param: return "#[" + sf::show(t->ctype.ctx) + " |- " + t->ctype.atom + "]";
    case Type::Kind::Arrow: {
      std::string s = show_type(t->dom, true) + " -> " + show_type(t->cod, false);
      return left ? "(" + s + ")" : s;
    }
    case Type::Kind::Forall: {
      std::string s = "{";
      for (std::size_t i = 0; i < t->vars.size(); ++i) s += (i ? " " : "") + t->vars[i];
      s += "} " + show_type(t->body, false);
      return left ? "(" + s + ")" : s;
    }
  }
  return "?";
}

std::string show_pat(const PatternPtr& p, bool atomic) {
  if (p->kind == Pattern::Kind::Var) return p->name;
  std::string s = p->name;
  if (!p->ctx_binders.empty()) {
    s += "{";
    for (std::size_t i = 0; i < p->ctx_binders.size(); ++i) s += (i ? "; " : "") + p->ctx_binders[i];
    s += "}";
  }
  for (const auto& a : p->args) s += " " + show_pat(a, true);
  return atomic && !p->args.empty() ? "(" + s + ")" : s;
}

enum class Prec { Top, App, Atom };

std::string show_expr(const ExprPtr& e, Prec p, int indent);

std::string nl(int indent) { return "\n" + std::string(static_cast<std::size_t>(indent), ' '); }

std::string wrap(std::string s, bool yes) { return yes ? "(" + s + ")" : s; }

// A branch body ending in a match would take the following branches.
bool ends_in_match(const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::Match:
    case Expr::Kind::CMatch: return true;
    case Expr::Kind::Let:
    case Expr::Kind::Fun: return ends_in_match(e->body);
    default: return false;
  }
}

std::string show_branch_body(const ExprPtr& e, int indent) {
  return wrap(show_expr(e, Prec::Top, indent), ends_in_match(e));
}

std::string show_expr(const ExprPtr& e, Prec p, int indent) {
  switch (e->kind) {
    case Expr::Kind::Fun:
      return wrap("fun " + e->name + " " + e->param + " ->" + nl(indent + 2) + show_expr(e->body, Prec::Top, indent + 2),
                  p != Prec::Top);
    case Expr::Kind::Let:
      return wrap("let " + e->name + " = " + show_expr(e->arg, Prec::Top, indent + 2) + " in" + nl(indent) +
                      show_expr(e->body, Prec::Top, indent),
                  p != Prec::Top);
    case Expr::Kind::Match: {
      std::string s = "match " + show_expr(e->arg, Prec::Top, indent + 2) + " with";
      for (const auto& b : e->branches)
        s += nl(indent) + "| " + show_pat(b.pattern, false) + " ->" + nl(indent + 4) +
             show_branch_body(b.body, indent + 4);
      return wrap(s, p != Prec::Top);
    }
    case Expr::Kind::CMatch: {
      std::string s = "match " + show_expr(e->arg, Prec::Top, indent + 2) + " with";
      for (const auto& b : e->cbranches) {
        std::string lit = b.ctx.turnstile ? show(b.ctx) + " |- " : "";
        s += nl(indent) + "| [" + lit + sf::show(b.pattern) + "] ->" + nl(indent + 4) +
             show_branch_body(b.body, indent + 4);
      }
      return wrap(s, p != Prec::Top);
    }
    case Expr::Kind::CtxObj: {
      std::string lit = e->lit.turnstile ? show(e->lit) + " |- " : "";
      return "[" + lit + sf::show(e->term) + "]";
    }
    case Expr::Kind::App:
      return wrap(show_expr(e->fn, Prec::App, indent) + " " + show_expr(e->arg, Prec::Atom, indent), p == Prec::Atom);
    case Expr::Kind::ConApp: {
      std::string s = e->name;
      if (e->explicit_ctxs) s += "{" + show_ctx_args(e->ctxs) + "}";
      for (const auto& a : e->args) s += " " + show_expr(a, Prec::Atom, indent);
      return wrap(s, p == Prec::Atom && !e->args.empty());
    }
    case Expr::Kind::Var: return e->name;
    case Expr::Kind::Ann: return "(" + show_expr(e->fn, Prec::Top, indent) + " : " + show(e->type) + ")";
    case Expr::Kind::Inst: return show_expr(e->fn, Prec::Atom, indent) + "{" + show_ctx_args(e->ctxs) + "}";
  }
  return "?";
}

bool gadt_form(const DataDecl& d) {
  if (d.arity != 0) return true;
  for (const auto& c : d.cons)
    if (!c.ctx_params.empty()) return true;
  return false;
}

}  // namespace

std::string show(const TypePtr& t) { return show_type(t, false); }
std::string show(const PatternPtr& p) { return show_pat(p, false); }
std::string show(const ExprPtr& e) { return show_expr(e, Prec::Top, 0); }

std::string show(const LitCtx& c) {
  if (c.names.empty()) return ".";
  std::string s;
  for (std::size_t i = 0; i < c.names.size(); ++i) {
    if (i) s += ", ";
    s += c.names[i];
    if (i < c.atoms.size() && !c.atoms[i].empty()) s += ":" + c.atoms[i];
  }
  return s;
}

std::string show_ctx_args(const std::vector<sf::Ctx>& cs) {
  std::string s;
  for (std::size_t i = 0; i < cs.size(); ++i) s += (i ? "; " : "") + sf::show(cs[i]);
  return s;
}

std::string show(const Program& p) {
  std::string s = "spec {\n";
  for (const auto& a : p.sf.atoms) s += "  " + a + " : type.\n";
  for (const auto& [c, t] : p.sf.constructors) s += "  " + c + " : " + sf::show(t) + ".\n";
  s += "}\n";
  for (const auto& d : p.data) {
    s += "\ndata " + d.name;
    if (gadt_form(d)) {
      s += "[" + std::to_string(d.arity) + "] =";
      for (const auto& c : d.cons) {
        s += "\n  | " + c.name + " : ";
        if (!c.ctx_params.empty()) {
          s += "{";
          for (std::size_t i = 0; i < c.ctx_params.size(); ++i) s += (i ? " " : "") + c.ctx_params[i];
          s += "} ";
        }
        for (const auto& a : c.args) s += show_type(a, true) + " -> ";
        s += show_type(data_type(d.name, c.indices), false);
      }
    } else {
      s += " =";
      for (const auto& c : d.cons) {
        s += "\n  | " + c.name;
        for (const auto& a : c.args) {
          bool atomic = a->kind == Type::Kind::Data || a->kind == Type::Kind::Ctx || a->kind == Type::Kind::Param;
          s += " " + (atomic ? show_type(a, false) : "(" + show_type(a, false) + ")");
        }
      }
    }
    s += "\n";
  }
  for (const auto& d : p.defs) s += "\ndef " + d.name + " : " + show(d.type) + " =\n  " + show_expr(d.body, Prec::Top, 2) + "\n";
  if (p.main) s += "\nmain " + *p.main + "\n";
  return s;
}

}  // namespace sfbox::ml

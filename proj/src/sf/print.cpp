#include "sfbox/sf/print.hpp"

namespace sfbox::sf {

namespace {

std::string show_type(const TypePtr& t, bool nested_left) {
  switch (t->kind) {
    case Type::Kind::Atom: return t->atom;
    case Type::Kind::Box: return "[" + show_type(t->arg, false) + "]";
    case Type::Kind::Arrow: {
      std::string s = show_type(t->arg, true) + " -> " + show_type(t->res, false);
      return nested_left ? "(" + s + ")" : s;
    }
  }
  return "?";
}

enum class Prec { Top, App, Atom };

std::string show_term(const TermPtr& m, Prec p);

std::string paren(std::string s, bool yes) { return yes ? "(" + s + ")" : s; }

std::string show_term(const TermPtr& m, Prec p) {
  switch (m->kind) {
    case Term::Kind::BVar: return m->name;
    case Term::Kind::QVar: return "'" + m->name;
    case Term::Kind::PVar: return std::string(m->weakening, '#') + m->name;
    case Term::Kind::Lam: return paren("\\" + m->name + ". " + show_term(m->body, Prec::Top), p != Prec::Top);
    case Term::Kind::Box: return paren("box " + show_term(m->body, Prec::Atom), p == Prec::Atom);
    case Term::Kind::Const: {
      if (m->args.empty()) return m->name;
      std::string s = m->name;
      for (const auto& a : m->args) s += " " + show_term(a, Prec::Atom);
      return paren(s, p == Prec::Atom);
    }
    case Term::Kind::Clo: {
      std::string body = m->body->kind == Term::Kind::QVar ? show_term(m->body, Prec::Atom)
                                                            : "(" + show_term(m->body, Prec::Top) + ")";
      return body + "[" + show(m->subst) + "]";
    }
  }
  return "?";
}

std::string show_pattern(const PatternPtr& r, Prec p) {
  switch (r->kind) {
    case Pattern::Kind::BVar: return r->name;
    case Pattern::Kind::QVar: return "'" + r->name;
    case Pattern::Kind::PVar: return std::string(r->weakening, '#') + r->name;
    case Pattern::Kind::Lam: return paren("\\" + r->name + ". " + show_pattern(r->body, Prec::Top), p != Prec::Top);
    case Pattern::Kind::Box: return paren("box " + show_pattern(r->body, Prec::Atom), p == Prec::Atom);
    case Pattern::Kind::Const: {
      if (r->args.empty()) return r->name;
      std::string s = r->name;
      for (const auto& a : r->args) s += " " + show_pattern(a, Prec::Atom);
      return paren(s, p == Prec::Atom);
    }
  }
  return "?";
}

}  // namespace

std::string show(const TypePtr& t) { return show_type(t, false); }

std::string show(const Ctx& c) {
  if (c.closed()) return ".";
  std::string s;
  if (c.var) s = *c.var;
  for (const auto& e : c.entries) {
    if (!s.empty()) s += ", ";
    s += (e.name.empty() ? std::string("_") : e.name) + ":" + e.atom;
  }
  return s;
}

std::string show(const ErasedCtx& c) {
  std::string s;
  for (const auto& n : c) {
    if (!s.empty()) s += ", ";
    s += n;
  }
  return s;
}

std::string show(const TermPtr& m) { return show_term(m, Prec::Top); }

std::string show(const Subst& s) {
  std::string out = s.elided ? "_" : "^" + std::to_string(s.shift);
  for (const auto& e : s.entries) out += "; " + show_term(e, Prec::Top);
  return out;
}

std::string show(const PatternPtr& r) { return show_pattern(r, Prec::Top); }

std::string show(const ContextualType& u) { return "[" + show(u.ctx) + " |- " + u.atom + "]"; }

std::string show(const ContextualObject& c) {
  if (c.ectx.empty()) return "[" + show(c.term) + "]";
  return "[" + show(c.ectx) + " |- " + show(c.term) + "]";
}

}  // namespace sfbox::sf

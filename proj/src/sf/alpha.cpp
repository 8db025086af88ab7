#include "sfbox/sf/alpha.hpp"

namespace sfbox::sf {

namespace {

void render(ErasedCtx& ctx, const TermPtr& m, std::string& out) {
  switch (m->kind) {
    case Term::Kind::BVar: {
      for (std::size_t i = ctx.size(); i > 0; --i)
        if (ctx[i - 1] == m->name) {
          out += "#" + std::to_string(ctx.size() - i);
          return;
        }
      out += "$" + m->name;
      return;
    }
    case Term::Kind::QVar: out += "'" + m->name; return;
    case Term::Kind::PVar: out += std::string(m->weakening, '%') + m->name; return;
    case Term::Kind::Lam:
      out += "(\\ ";
      ctx.push_back(m->name);
      render(ctx, m->body, out);
      ctx.pop_back();
      out += ")";
      return;
    case Term::Kind::Box: {
      ErasedCtx inner;
      out += "(box ";
      render(inner, m->body, out);
      out += ")";
      return;
    }
    case Term::Kind::Const:
      out += "(" + m->name;
      for (const auto& a : m->args) {
        out += " ";
        render(ctx, a, out);
      }
      out += ")";
      return;
    case Term::Kind::Clo: {
      ErasedCtx dom = erase(m->domain);
      out += "(clo ";
      render(dom, m->body, out);
      out += " ^" + std::to_string(m->subst.shift);
      for (const auto& e : m->subst.entries) {
        out += " ";
        render(ctx, e, out);
      }
      out += ")";
      return;
    }
  }
}

}  // namespace

std::string nameless(const ErasedCtx& ctx, const TermPtr& m) {
  ErasedCtx c = ctx;
  std::string out;
  render(c, m, out);
  return out;
}

bool alpha_eq(const TermPtr& m, const TermPtr& n) { return nameless({}, m) == nameless({}, n); }

bool alpha_eq(const ContextualObject& a, const ContextualObject& b) {
  return a.ectx.size() == b.ectx.size() && nameless(a.ectx, a.term) == nameless(b.ectx, b.term);
}

}  // namespace sfbox::sf

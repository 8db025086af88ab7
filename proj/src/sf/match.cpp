#include "sfbox/sf/match.hpp"

#include <algorithm>

#include "sfbox/diagnostic.hpp"
#include "sfbox/sf/subst.hpp"

namespace sfbox::sf {

namespace {

// Distance of the innermost occurrence of x from the end of ctx.
std::optional<std::size_t> depth_of(const std::vector<std::string>& ctx, const std::string& x) {
  for (std::size_t i = ctx.size(); i > 0; --i)
    if (ctx[i - 1] == x) return ctx.size() - i;
  return std::nullopt;
}

bool contains(const ErasedCtx& ctx, const std::string& x) { return std::find(ctx.begin(), ctx.end(), x) != ctx.end(); }

class Matcher {
public:
  bool go(ErasedCtx& vctx, std::vector<std::string>& pctx, const PatternPtr& r, const TermPtr& m) {
    switch (r->kind) {
      case Pattern::Kind::Lam: {
        if (m->kind != Term::Kind::Lam) return false;
        // Keep the erased context duplicate-free so bindings are positionally unambiguous.
        std::string y = m->name;
        TermPtr body = m->body;
        if (contains(vctx, y)) {
          y = fresh_name(y, vctx);
          ErasedCtx from = vctx, to = vctx;
          from.push_back(m->name);
          to.push_back(y);
          body = rename_ctx(from, to, body);
        }
        vctx.push_back(y);
        pctx.push_back(r->name);
        bool ok = go(vctx, pctx, r->body, body);
        vctx.pop_back();
        pctx.pop_back();
        return ok;
      }
      case Pattern::Kind::Box: {
        if (m->kind != Term::Kind::Box) return false;
        ErasedCtx v;
        std::vector<std::string> p;
        return go(v, p, r->body, m->body);
      }
      case Pattern::Kind::BVar: {
        if (m->kind != Term::Kind::BVar) return false;
        auto dp = depth_of(pctx, r->name);
        auto dv = depth_of(vctx, m->name);
        return dp && dv && *dp == *dv;
      }
      case Pattern::Kind::Const: {
        if (m->kind != Term::Kind::Const || m->name != r->name || m->args.size() != r->args.size()) return false;
        for (std::size_t i = 0; i < r->args.size(); ++i)
          if (!go(vctx, pctx, r->args[i], m->args[i])) return false;
        return true;
      }
      case Pattern::Kind::QVar:
        out.push_back({r->name, ContextualObject{vctx, m}, false});
        return true;
      case Pattern::Kind::PVar: {
        if (m->kind != Term::Kind::BVar) return false;
        auto dv = depth_of(vctx, m->name);
        std::size_t skip = r->weakening - 1;
        if (!dv || *dv < skip) return false;
        ErasedCtx kept(vctx.begin(), vctx.end() - static_cast<std::ptrdiff_t>(skip));
        out.push_back({r->name, ContextualObject{std::move(kept), m}, true});
        return true;
      }
    }
    return false;
  }

  Bindings out;
};

const MatchBinding& find_binding(const Bindings& rho, const std::string& name) {
  for (const auto& b : rho)
    if (b.name == name) return b;
  fail(Code::InternalInvariantViolation, "no binding for " + name);
}

TermPtr inst(const PatternPtr& r, ErasedCtx& vctx, std::vector<std::string>& pctx, const Bindings& rho) {
  switch (r->kind) {
    case Pattern::Kind::Lam: {
      std::string y = fresh_name(r->name, vctx);
      vctx.push_back(y);
      pctx.push_back(r->name);
      TermPtr body = inst(r->body, vctx, pctx, rho);
      vctx.pop_back();
      pctx.pop_back();
      return lam(y, body);
    }
    case Pattern::Kind::Box: {
      ErasedCtx v;
      std::vector<std::string> p;
      return box(inst(r->body, v, p, rho));
    }
    case Pattern::Kind::BVar: {
      auto d = depth_of(pctx, r->name);
      if (!d) fail(Code::InternalInvariantViolation, "pattern variable " + r->name + " is not in scope");
      return bvar(vctx[vctx.size() - 1 - *d]);
    }
    case Pattern::Kind::Const: {
      std::vector<TermPtr> args;
      for (const auto& a : r->args) args.push_back(inst(a, vctx, pctx, rho));
      return const_app(r->name, std::move(args));
    }
    case Pattern::Kind::QVar: {
      const auto& b = find_binding(rho, r->name);
      return rename_ctx(b.value.ectx, vctx, b.value.term);
    }
    case Pattern::Kind::PVar: {
      const auto& b = find_binding(rho, r->name);
      const auto& e = b.value.ectx;
      auto d = depth_of(e, b.value.term->name);
      std::size_t skip = r->weakening - 1;
      if (!d || e.size() + skip != vctx.size())
        fail(Code::InternalInvariantViolation, "parameter binding for " + r->name + " does not fit its context");
      std::size_t pos = e.size() - 1 - *d;
      return bvar(vctx[pos]);
    }
  }
  fail(Code::InternalInvariantViolation, "unknown SF pattern");
}

}  // namespace

std::optional<Bindings> match_sf(const ErasedCtx& value_ctx, const std::vector<std::string>& pattern_names,
                                 const PatternPtr& r, const TermPtr& m) {
  Matcher mt;
  ErasedCtx v = value_ctx;
  std::vector<std::string> p = pattern_names;
  if (!mt.go(v, p, r, m)) return std::nullopt;
  return std::move(mt.out);
}

TermPtr instantiate(const PatternPtr& r, const ErasedCtx& value_ctx, const std::vector<std::string>& pattern_names,
                    const Bindings& rho) {
  ErasedCtx v = value_ctx;
  std::vector<std::string> p = pattern_names;
  return inst(r, v, p, rho);
}

std::vector<std::string> align_names(const std::vector<std::string>& suffix, std::size_t n) {
  std::vector<std::string> out(n >= suffix.size() ? n - suffix.size() : 0, "");
  out.insert(out.end(), suffix.begin(), suffix.end());
  return out;
}

}  // namespace sfbox::sf

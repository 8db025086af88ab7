#include "sfbox/driver/gen.hpp"

#include <algorithm>
#include <climits>
#include <functional>
#include <optional>
#include <set>

#include "sfbox/diagnostic.hpp"
#include "sfbox/driver/parse.hpp"

namespace sfbox::driver::gen {

namespace {

const char* kBinders[] = {"x", "y", "z", "w"};

int add_cost(int a, int b) { return a >= INT_MAX / 4 || b >= INT_MAX / 4 ? INT_MAX / 4 : a + b; }

// Entries of psi that a name can still reach, innermost first.
std::vector<sf::CtxEntry> accessible(const sf::Ctx& psi) {
  std::vector<sf::CtxEntry> out;
  std::set<std::string> seen;
  for (auto it = psi.entries.rbegin(); it != psi.entries.rend(); ++it)
    if (seen.insert(it->name).second) out.push_back(*it);
  return out;
}

bool has_atom(const sf::Ctx& psi, const std::string& a) {
  return std::any_of(psi.entries.begin(), psi.entries.end(), [&](const auto& e) { return e.atom == a; });
}

}  // namespace

const std::string& tm_spec() {
  static const std::string s = R"(spec {
  tm : type.
  cst : tm.
  pair : tm -> tm -> tm.
  lam : (tm -> tm) -> tm.
  fst : tm -> tm.
  snd : tm -> tm.
  letpair : tm -> (tm -> tm -> tm) -> tm.
  letv : tm -> (tm -> tm) -> tm.
  app : tm -> tm -> tm.
}
)";
  return s;
}

const std::string& cloconv_spec() {
  static const std::string s = R"(spec {
  tm : type.
  app : tm -> tm -> tm.
  lam : (tm -> tm) -> tm.
  ctm : type.
  btm : type.
  env : type.
  capp : ctm -> ctm -> ctm.
  clam : [btm] -> ctm.
  clo : ctm -> env -> ctm.
  embed : ctm -> btm.
  bind : (ctm -> btm) -> btm.
  empty : env.
  dot : env -> ctm -> env.
}
)";
  return s;
}

sf::Signature tm_signature() { return parse_program(tm_spec()).sf; }
sf::Signature cloconv_signature() { return parse_program(cloconv_spec()).sf; }

SfGen::SfGen(sf::Signature sig, std::mt19937_64& rng) : sig_(std::move(sig)), rng_(rng) {
  if (sig_.atoms.size() > 16) fail(Code::InternalInvariantViolation, "too many atoms to generate terms for");
  std::size_t n = sig_.atoms.size();
  cost_.assign(std::size_t{1} << n, std::vector<int>(n, INT_MAX / 4));
  for (unsigned m = 0; m < cost_.size(); ++m)
    for (std::size_t a = 0; a < n; ++a)
      if (m & (1u << a)) cost_[m][a] = 0;
  // Cheapest completion of each atom given the atoms that have a variable, to a fixpoint.
  for (bool changed = true; changed;) {
    changed = false;
    for (unsigned m = 0; m < cost_.size(); ++m) {
      for (const auto& [k, t] : sig_.constructors) {
        std::size_t a = index(sf::spine_target(t));
        int total = 1;
        for (const auto& arg : sf::spine_args(t)) total = add_cost(total, cost(arg, m));
        if (total < cost_[m][a]) {
          cost_[m][a] = total;
          changed = true;
        }
      }
    }
  }
}

std::size_t SfGen::index(const std::string& a) const {
  return static_cast<std::size_t>(std::find(sig_.atoms.begin(), sig_.atoms.end(), a) - sig_.atoms.begin());
}

std::size_t SfGen::pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

std::string SfGen::atom() { return sig_.atoms[pick(sig_.atoms.size())]; }

int SfGen::cost(const sf::TypePtr& t, unsigned avail) const {
  if (t->kind == sf::Type::Kind::Box) return cost(t->arg, 0);
  for (const auto& p : sf::spine_args(t)) avail |= 1u << index(p->atom);
  return cost_[avail][index(sf::spine_target(t))];
}

sf::Ctx SfGen::context(std::size_t max_len, Names& names) {
  sf::Ctx c;
  std::size_t n = pick(max_len + 1);
  for (std::size_t i = 0; i < n; ++i) c.entries.push_back({names.fresh("v"), atom()});
  return c;
}

sf::TermPtr SfGen::term(const sf::Ctx& psi, const std::string& a, int depth, const std::vector<Hole>& holes) {
  return term_in(psi, a, depth, holes, false);
}

sf::TermPtr SfGen::arg(const sf::Ctx& psi, const sf::TypePtr& t, int depth, const std::vector<Hole>& holes,
                       bool boxed) {
  if (t->kind == sf::Type::Kind::Box) return sf::box(arg(sf::Ctx{}, t->arg, depth, holes, true));
  if (t->kind == sf::Type::Kind::Atom) return term_in(psi, t->atom, depth, holes, boxed);
  sf::Ctx inner = psi;
  std::vector<std::string> binders;
  for (const auto& p : sf::spine_args(t)) {
    binders.push_back(kBinders[pick(std::size(kBinders))]);
    inner = inner.extend(binders.back(), p->atom);
  }
  auto body = term_in(inner, sf::spine_target(t), depth, holes, boxed);
  for (auto it = binders.rbegin(); it != binders.rend(); ++it) body = sf::lam(*it, body);
  return body;
}

sf::TermPtr SfGen::term_in(const sf::Ctx& psi, const std::string& a, int depth, const std::vector<Hole>& holes,
                           bool boxed) {
  std::vector<std::function<sf::TermPtr()>> leaves, nodes;
  for (const auto& e : accessible(psi))
    if (e.atom == a) leaves.push_back([n = e.name] { return sf::bvar(n); });
  for (const auto& h : holes) {
    if (h.type.atom != a) continue;
    if (sf::same_shape(h.type.ctx, psi)) {
      leaves.push_back([&h] { return h.param ? sf::pvar(h.name) : sf::qvar(h.name); });
    } else if (!h.param && h.type.ctx.var == psi.var && (!boxed || h.type.ctx.closed())) {
      nodes.push_back([&, this] {
        sf::Subst s;
        s.elided = true;
        for (const auto& e : h.type.ctx.entries) s.entries.push_back(term_in(psi, e.atom, depth - 1, holes, boxed));
        return sf::clo(sf::qvar(h.name), s);
      });
    }
  }
  std::vector<std::pair<std::string, sf::TypePtr>> cons;
  for (const auto& kt : sig_.constructors)
    if (sf::spine_target(kt.second) == a) cons.push_back(kt);
  auto build = [&, this](const std::pair<std::string, sf::TypePtr>& kt) {
    std::vector<sf::TermPtr> args;
    for (const auto& t : sf::spine_args(kt.second)) args.push_back(arg(psi, t, depth - 1, holes, boxed));
    return sf::const_app(kt.first, std::move(args));
  };
  if (depth <= 0) {
    if (!leaves.empty()) return leaves[pick(leaves.size())]();
    unsigned avail = 0;
    for (const auto& e : accessible(psi)) avail |= 1u << index(e.atom);
    const std::pair<std::string, sf::TypePtr>* best = nullptr;
    int best_cost = INT_MAX;
    for (const auto& kt : cons) {
      int c = 1;
      for (const auto& t : sf::spine_args(kt.second)) c = add_cost(c, cost(t, avail));
      if (c < best_cost) {
        best_cost = c;
        best = &kt;
      }
    }
    if (!best) fail(Code::InternalInvariantViolation, "no term of atom " + a + " can be generated");
    return build(*best);
  }
  for (const auto& kt : cons) nodes.push_back([&, kt] { return build(kt); });
  if (!nodes.empty() && !cons.empty()) nodes.push_back([&, this] { return build(cons[pick(cons.size())]); });
  std::size_t total = leaves.size() + nodes.size();
  if (total == 0) return term_in(psi, a, 0, holes, boxed);
  std::size_t i = pick(total);
  return i < leaves.size() ? leaves[i]() : nodes[i - leaves.size()]();
}

std::pair<sf::Subst, sf::Ctx> SfGen::subst_into(const sf::Ctx& psi, int depth, Names& names,
                                                const std::vector<Hole>& holes) {
  sf::Subst s;
  s.shift = pick(psi.size() + 1);
  sf::Ctx phi = psi.drop(s.shift);
  std::size_t k = pick(3);
  for (std::size_t i = 0; i < k; ++i) {
    std::string a = atom();
    phi = phi.extend(names.fresh("u"), a);
    s.entries.push_back(term(psi, a, depth, holes));
  }
  return {s, phi};
}

std::pair<sf::PatternPtr, std::vector<Hole>> SfGen::pattern(const sf::Ctx& psi, const std::string& a, int depth,
                                                            Names& names) {
  std::vector<Hole> out;
  auto r = pat_in(psi, a, depth, names, out);
  return {r, out};
}

sf::PatternPtr SfGen::pat_arg(const sf::Ctx& psi, const sf::TypePtr& t, int depth, Names& names,
                              std::vector<Hole>& out) {
  if (t->kind == sf::Type::Kind::Box) return sf::pbox(pat_arg(sf::Ctx{}, t->arg, depth, names, out));
  if (t->kind == sf::Type::Kind::Atom) return pat_in(psi, t->atom, depth, names, out);
  sf::Ctx inner = psi;
  std::vector<std::string> binders;
  for (const auto& p : sf::spine_args(t)) {
    binders.push_back(kBinders[pick(std::size(kBinders))]);
    inner = inner.extend(binders.back(), p->atom);
  }
  auto body = pat_in(inner, sf::spine_target(t), depth, names, out);
  for (auto it = binders.rbegin(); it != binders.rend(); ++it) body = sf::plam(*it, body);
  return body;
}

sf::PatternPtr SfGen::pat_in(const sf::Ctx& psi, const std::string& a, int depth, Names& names,
                             std::vector<Hole>& out) {
  std::vector<std::function<sf::PatternPtr()>> opts;
  auto quoted = [&] {
    auto u = names.fresh("m");
    out.push_back({u, {psi, a}, false});
    return sf::pqvar(u);
  };
  opts.push_back(quoted);
  if (psi.var || has_atom(psi, a))
    opts.push_back([&] {
      auto p = names.fresh("p");
      out.push_back({p, {psi, a}, true});
      return sf::ppvar(p);
    });
  if (!psi.entries.empty() && (psi.var || has_atom(psi.drop(1), a)))
    opts.push_back([&] {
      auto p = names.fresh("p");
      out.push_back({p, {psi.drop(1), a}, true});
      return sf::ppvar(p, 2);
    });
  for (const auto& e : accessible(psi))
    if (e.atom == a) opts.push_back([n = e.name] { return sf::pbvar(n); });
  if (depth > 0) {
    for (const auto& [k, t] : sig_.constructors) {
      if (sf::spine_target(t) != a) continue;
      auto node = [&, k = k, t = t] {
        std::vector<sf::PatternPtr> args;
        for (const auto& at : sf::spine_args(t)) args.push_back(pat_arg(psi, at, depth - 1, names, out));
        return sf::pconst(k, std::move(args));
      };
      opts.push_back(node);
      opts.push_back(node);
    }
  }
  return opts[pick(opts.size())]();
}

namespace {

bool simple(const sf::TermPtr& m) {
  switch (m->kind) {
    case sf::Term::Kind::Const: return m->args.empty();
    case sf::Term::Kind::Lam: return false;
    default: return true;
  }
}

bool simple(const sf::PatternPtr& r) {
  switch (r->kind) {
    case sf::Pattern::Kind::Const: return r->args.empty();
    case sf::Pattern::Kind::Lam: return false;
    default: return true;
  }
}

}  // namespace

std::string surface(const sf::TermPtr& m) {
  switch (m->kind) {
    case sf::Term::Kind::Const: {
      std::string s = m->name;
      for (const auto& a : m->args) s += simple(a) ? " " + surface(a) : " (" + surface(a) + ")";
      return s;
    }
    case sf::Term::Kind::Lam: return "\\" + m->name + ". " + surface(m->body);
    case sf::Term::Kind::Box: return "{" + surface(m->body) + "}";
    case sf::Term::Kind::BVar: return m->name;
    case sf::Term::Kind::QVar: return "'" + m->name;
    case sf::Term::Kind::PVar: return std::string(m->weakening, '#') + m->name;
    case sf::Term::Kind::Clo: {
      std::string s = surface(m->body) + "[";
      s += m->subst.elided ? "_" : "^" + std::to_string(m->subst.shift);
      for (const auto& e : m->subst.entries) s += "; " + surface(e);
      return s + "]";
    }
  }
  return "";
}

std::string surface(const sf::PatternPtr& r) {
  switch (r->kind) {
    case sf::Pattern::Kind::Const: {
      std::string s = r->name;
      for (const auto& a : r->args) s += simple(a) ? " " + surface(a) : " (" + surface(a) + ")";
      return s;
    }
    case sf::Pattern::Kind::Lam: return "\\" + r->name + ". " + surface(r->body);
    case sf::Pattern::Kind::Box: return "{" + surface(r->body) + "}";
    case sf::Pattern::Kind::BVar: return r->name;
    case sf::Pattern::Kind::QVar: return "'" + r->name;
    case sf::Pattern::Kind::PVar: return std::string(r->weakening, '#') + r->name;
  }
  return "";
}

std::string surface(const sf::Ctx& c) {
  std::vector<std::string> parts;
  if (c.var) parts.push_back(*c.var);
  for (const auto& e : c.entries) parts.push_back(e.name + ":" + e.atom);
  if (parts.empty()) return ".";
  std::string s = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) s += ", " + parts[i];
  return s;
}

namespace {

struct GType {
  enum class K { Nat, Bool, Hold, Ctx, Param };
  K k;
  sf::ContextualType ct{};
};

bool same_type(const GType& a, const GType& b) {
  if (a.k != b.k) return false;
  if (a.k != GType::K::Ctx && a.k != GType::K::Param) return true;
  return a.ct.atom == b.ct.atom && sf::same_shape(a.ct.ctx, b.ct.ctx);
}

std::string show_ctype(const sf::ContextualType& u) {
  if (u.ctx.closed()) return "[" + u.atom + "]";
  return "[" + surface(u.ctx) + " |- " + u.atom + "]";
}

std::string show_type(const GType& t) {
  switch (t.k) {
    case GType::K::Nat: return "nat";
    case GType::K::Bool: return "bool";
    case GType::K::Hold: return "hold";
    case GType::K::Ctx: return show_ctype(t.ct);
    case GType::K::Param: return "#" + show_ctype(t.ct);
  }
  return "";
}

struct Fn {
  std::string name;
  bool poly = false;
  GType dom, cod;
};

struct Var {
  std::string name;
  GType type;
  bool shrinks = false;  // the function's argument or a piece of it: its pieces are smaller
  bool smaller = false;  // strictly smaller than the function's argument
};

using Scope = std::vector<Var>;

struct Call {
  std::string head;
  GType dom, cod;
  std::optional<std::string> fixed_arg;
};

class ProgGen {
public:
  ProgGen(std::mt19937_64& rng, bool cloconv)
      : rng_(rng), sf_(cloconv ? cloconv_signature() : tm_signature(), rng), spec_(cloconv ? cloconv_spec() : tm_spec()) {}

  std::string run(const ProgramOptions& opt) {
    std::string out = "-- generated\n\n" + spec_ +
                      "\ndata nat =\n  | Z\n  | S nat\n\ndata bool =\n  | True\n  | False\n\n"
                      "data hold =\n  | Hold [tm]\n  | Skip\n";
    int nf = static_cast<int>(pick(static_cast<std::size_t>(opt.functions) + 1));
    for (int i = 0; i < nf; ++i) out += "\n" + function(opt.depth);
    GType t = value_type(false);
    self_ = nullptr;
    poly_ = false;
    out += "\ndef result : " + show_type(t) + " =\n  " + expr({}, t, opt.depth, true) + "\n\nmain result\n";
    return out;
  }

private:
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool coin(int num, int den) { return static_cast<int>(pick(static_cast<std::size_t>(den))) < num; }

  std::string fresh_ml() { return names_.fresh("v"); }

  sf::Ctx ctx(bool poly, std::size_t max_entries) {
    sf::Ctx c;
    if (poly) c.var = "g";
    std::size_t n = pick(max_entries + 1);
    for (std::size_t i = 0; i < n; ++i) c.entries.push_back({names_.fresh("x"), sf_.atom()});
    return c;
  }

  // Fresh, distinct entry names; types only compare positions.
  sf::Ctx freshen(const sf::Ctx& c) {
    sf::Ctx out = c;
    for (auto& e : out.entries) e.name = names_.fresh("x");
    return out;
  }

  GType ctx_type(bool poly, std::size_t max_entries) {
    return GType{GType::K::Ctx, {ctx(poly, max_entries), sf_.atom()}};
  }

  GType value_type(bool poly) {
    switch (pick(5)) {
      case 0: return GType{GType::K::Nat};
      case 1: return GType{GType::K::Bool};
      case 2: return GType{GType::K::Hold};
      default: return ctx_type(poly, poly ? 1 : 2);
    }
  }

  std::string function(int depth) {
    Fn f;
    f.name = names_.fresh("f");
    f.poly = coin(1, 2);
    f.dom = coin(1, 4) ? GType{GType::K::Nat} : ctx_type(f.poly, f.poly ? 1 : 2);
    if (f.dom.k == GType::K::Nat) f.poly = false;
    f.cod = value_type(f.poly);
    fns_.push_back(f);
    self_ = &fns_.back();
    poly_ = f.poly;
    std::string x = fresh_ml();
    Scope sc{{x, f.dom, true, false}};
    std::string type = (f.poly ? "{g} " : "") + show_type(f.dom) + " -> " + show_type(f.cod);
    std::string body = expr(sc, f.cod, depth - 1, false);
    return "def " + f.name + " : " + type + " =\n  fun " + f.name + " " + x + " ->\n    " + body + "\n";
  }

  // cod with g := p, entries renamed.
  GType instantiate(const GType& t, const sf::Ctx& p) {
    if (t.k != GType::K::Ctx || !t.ct.ctx.var) return t;
    GType out = t;
    out.ct.ctx = p;
    for (const auto& e : t.ct.ctx.entries) out.ct.ctx.entries.push_back({names_.fresh("x"), e.atom});
    return out;
  }

  // The instantiation p with (p, suffix) shaped like `have`, when `want` is (g, suffix).
  std::optional<sf::Ctx> solve(const sf::ContextualType& want, const sf::ContextualType& have) {
    if (want.atom != have.atom || have.ctx.size() < want.ctx.size()) return std::nullopt;
    std::size_t off = have.ctx.size() - want.ctx.size();
    for (std::size_t i = 0; i < want.ctx.size(); ++i)
      if (want.ctx.entries[i].atom != have.ctx.entries[off + i].atom) return std::nullopt;
    return have.ctx.drop(want.ctx.size());
  }

  std::string inst_head(const Fn& f, const sf::Ctx& p) { return f.name + "{" + surface(p) + "}"; }

  std::vector<Call> calls(const Scope& sc) {
    std::vector<Call> out;
    for (const auto& f : fns_) {
      if (&f == self_) continue;
      if (!f.poly) {
        out.push_back({f.name, f.dom, f.cod, std::nullopt});
        continue;
      }
      sf::Ctx p = poly_ && coin(1, 2) ? ctx(true, 1) : ctx(false, 2);
      out.push_back({inst_head(f, p), instantiate(f.dom, p), instantiate(f.cod, p), std::nullopt});
    }
    if (self_) {
      for (const auto& v : sc) {
        if (!v.smaller) continue;
        if (!self_->poly) {
          if (same_type(v.type, self_->dom)) out.push_back({self_->name, self_->dom, self_->cod, v.name});
          continue;
        }
        if (v.type.k != GType::K::Ctx || v.type.ct.ctx.var != std::optional<std::string>("g")) continue;
        if (auto p = solve(self_->dom.ct, v.type.ct))
          out.push_back({inst_head(*self_, *p), v.type, instantiate(self_->cod, *p), v.name});
      }
    }
    return out;
  }

  // Calls whose result is t; poly functions with a contextual result are instantiated to fit.
  std::vector<Call> calls_to(const Scope& sc, const GType& t) {
    std::vector<Call> out;
    for (auto& c : calls(sc))
      if (same_type(c.cod, t)) out.push_back(c);
    for (const auto& f : fns_) {
      if (&f == self_ || !f.poly || f.cod.k != GType::K::Ctx || t.k != GType::K::Ctx) continue;
      auto p = solve(f.cod.ct, t.ct);
      if (!p || (p->var && !poly_)) continue;
      out.push_back({inst_head(f, *p), instantiate(f.dom, *p), t, std::nullopt});
    }
    return out;
  }

  std::string call_text(const Scope& sc, const Call& c, int depth) {
    std::string arg = c.fixed_arg ? *c.fixed_arg : "(" + expr(sc, c.dom, depth - 1, false) + ")";
    return c.head + " " + arg;
  }

  std::vector<Hole> holes(const Scope& sc) {
    std::vector<Hole> hs;
    std::set<std::string> seen;
    for (auto it = sc.rbegin(); it != sc.rend(); ++it) {
      if (!seen.insert(it->name).second) continue;
      if (it->type.k == GType::K::Ctx) hs.push_back({it->name, it->type.ct, false});
      if (it->type.k == GType::K::Param) hs.push_back({it->name, it->type.ct, true});
    }
    return hs;
  }

  static std::string lit_prefix(const sf::Ctx& c) {
    if (c.entries.empty()) return "";
    std::string s = c.var ? "_" : "";
    for (const auto& e : c.entries) s += (s.empty() ? "" : ", ") + e.name;
    return s + " |- ";
  }

  std::string literal(const Scope& sc, const sf::ContextualType& u, int depth) {
    sf::Ctx psi = freshen(u.ctx);
    auto hs = holes(sc);
    auto m = sf_.term(psi, u.atom, std::min(depth, 3), hs);
    return "[" + lit_prefix(psi) + surface(m) + "]";
  }

  std::string expr(const Scope& sc, const GType& t, int depth, bool top) {
    std::vector<std::pair<int, std::function<std::string()>>> opts;
    for (const auto& v : sc)
      if (same_type(v.type, t)) opts.push_back({2, [n = v.name] { return n; }});
    switch (t.k) {
      case GType::K::Nat:
        opts.push_back({1, [] { return std::string("Z"); }});
        if (depth > 0) opts.push_back({2, [&] { return "S (" + expr(sc, t, depth - 1, false) + ")"; }});
        break;
      case GType::K::Bool:
        opts.push_back({1, [] { return std::string("True"); }});
        opts.push_back({1, [] { return std::string("False"); }});
        break;
      case GType::K::Hold:
        opts.push_back({1, [] { return std::string("Skip"); }});
        opts.push_back({2, [&] {
                          GType c{GType::K::Ctx, {sf::Ctx{}, "tm"}};
                          return "Hold (" + expr(sc, c, depth - 1, false) + ")";
                        }});
        break;
      case GType::K::Ctx:
        opts.push_back({3, [&] { return literal(sc, t.ct, depth); }});
        break;
      case GType::K::Param: break;
    }
    std::vector<Call> all;
    std::vector<const Var*> scrutinees;
    if (depth > 0) {
      auto cs = calls_to(sc, t);
      int w = top ? 6 : 3;
      for (const auto& c : cs) opts.push_back({w, [&, c] { return call_text(sc, c, depth); }});
      all = calls(sc);
      if (!all.empty())
        opts.push_back({w, [&] {
                          Call c = all[pick(all.size())];
                          std::string y = fresh_ml();
                          Scope inner = sc;
                          inner.push_back({y, c.cod, false, false});
                          return "(let " + y + " = " + call_text(sc, c, depth) + " in\n    " +
                                 expr(inner, t, depth - 1, false) + ")";
                        }});
      for (const auto& v : sc)
        if (v.type.k != GType::K::Param) scrutinees.push_back(&v);
      if (!scrutinees.empty())
        opts.push_back({3, [&] {
                          const Var& v = *scrutinees[pick(scrutinees.size())];
                          return v.type.k == GType::K::Ctx ? cmatch(sc, v, t, depth - 1) : data_match(sc, v, t, depth - 1);
                        }});
    }
    int total = 0;
    for (auto& o : opts) total += o.first;
    int r = static_cast<int>(pick(static_cast<std::size_t>(total)));
    for (auto& o : opts) {
      if (r < o.first) return o.second();
      r -= o.first;
    }
    return opts.back().second();
  }

  std::string data_match(const Scope& sc, const Var& v, const GType& t, int depth) {
    std::string s = "(match " + v.name + " with";
    bool pieces = v.shrinks || v.smaller;
    switch (v.type.k) {
      case GType::K::Nat: {
        std::string n = fresh_ml();
        Scope inner = sc;
        inner.push_back({n, v.type, pieces, pieces});
        s += "\n     | Z -> (" + expr(sc, t, depth - 1, false) + ")";
        s += "\n     | S " + n + " -> (" + expr(inner, t, depth - 1, false) + ")";
        break;
      }
      case GType::K::Bool:
        s += "\n     | True -> (" + expr(sc, t, depth - 1, false) + ")";
        s += "\n     | False -> (" + expr(sc, t, depth - 1, false) + ")";
        break;
      default: {
        std::string h = fresh_ml();
        Scope inner = sc;
        inner.push_back({h, GType{GType::K::Ctx, {sf::Ctx{}, "tm"}}, false, false});
        s += "\n     | Hold " + h + " -> (" + expr(inner, t, depth - 1, false) + ")";
        s += "\n     | Skip -> (" + expr(sc, t, depth - 1, false) + ")";
      }
    }
    return s + ")";
  }

  std::string cmatch(const Scope& sc, const Var& v, const GType& t, int depth) {
    std::string s = "(match " + v.name + " with";
    bool pieces = v.shrinks || v.smaller;
    std::size_t n = 1 + pick(2);
    for (std::size_t i = 0; i < n; ++i) {
      sf::Ctx psi = freshen(v.type.ct.ctx);
      auto [r, binds] = sf_.pattern(psi, v.type.ct.atom, 2, names_);
      Scope inner = sc;
      for (const auto& b : binds) {
        GType bt{b.param ? GType::K::Param : GType::K::Ctx, b.type};
        bool smaller = pieces && !b.param && r->kind != sf::Pattern::Kind::QVar;
        inner.push_back({b.name, bt, smaller, smaller});
      }
      s += "\n     | [" + lit_prefix(psi) + surface(r) + "] -> (" + expr(inner, t, depth - 1, false) + ")";
    }
    std::string o = fresh_ml();
    Scope inner = sc;
    inner.push_back({o, v.type, false, false});
    s += "\n     | ['" + o + "] -> (" + expr(inner, t, depth - 1, false) + "))";
    return s;
  }

  std::mt19937_64& rng_;
  SfGen sf_;
  std::string spec_;
  Names names_;
  std::vector<Fn> fns_;
  const Fn* self_ = nullptr;
  bool poly_ = false;
};

}  // namespace

std::string program(std::mt19937_64& rng, const ProgramOptions& opt) {
  bool cloconv = std::uniform_int_distribution<int>(0, 1)(rng) == 1;
  ProgGen g(rng, cloconv);
  return g.run(opt);
}

}  // namespace sfbox::driver::gen

#include "sfbox/driver/parse.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "sfbox/diagnostic.hpp"

namespace sfbox::driver {

namespace {

enum class Tok { Name, Nat, Sym, End };

struct Token {
  Tok kind;
  std::string text;
  SourceLoc loc;
};

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (s.compare(i, 2, "--") == 0) {
      while (i < s.size() && s[i] != '\n') advance(1);
      continue;
    }
    SourceLoc loc{line, col};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      out.push_back({Tok::Name, s.substr(i, j - i), loc});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Tok::Nat, s.substr(i, j - i), loc});
      advance(j - i);
      continue;
    }
    for (const char* sym : {"->", "|-"}) {
      if (s.compare(i, 2, sym) == 0) {
        out.push_back({Tok::Sym, sym, loc});
        advance(2);
        goto next;
      }
    }
    if (std::string("|:.,;()[]{}\\'#^=").find(c) != std::string::npos) {
      out.push_back({Tok::Sym, std::string(1, c), loc});
      advance(1);
      continue;
    }
    fail(Code::SyntaxError, std::string("unexpected character '") + c + "'", loc);
  next:;
  }
  out.push_back({Tok::End, "", {line, col}});
  return out;
}

bool is_upper(const std::string& n) { return !n.empty() && std::isupper(static_cast<unsigned char>(n[0])); }

const char* const kKeywords[] = {"spec", "type", "data", "def", "main", "fun", "let", "in", "match", "with", "box"};

bool is_keyword(const std::string& n) {
  for (const char* k : kKeywords)
    if (n == k) return true;
  return false;
}

class Parser {
public:
  Parser(const std::string& text, sf::Signature sig) : toks_(lex(text)), sig_(std::move(sig)) {}

  ml::Program program() {
    ml::Program p;
    expect_name("spec");
    expect("{");
    while (!at("}")) {
      Token n = name();
      expect(":");
      if (at_name("type")) {
        ++pos_;
        p.sf.atoms.push_back(n.text);
      } else {
        p.sf.constructors.emplace_back(n.text, sftype());
      }
      expect(".");
    }
    expect("}");
    sig_ = p.sf;
    while (!at_end()) {
      if (at_name("data")) {
        p.data.push_back(data_decl());
      } else if (at_name("def")) {
        SourceLoc loc = peek().loc;
        ++pos_;
        ml::Def d;
        d.loc = loc;
        d.name = name().text;
        expect(":");
        d.type = mltype();
        expect("=");
        d.body = expr();
        p.defs.push_back(std::move(d));
      } else if (at_name("main")) {
        ++pos_;
        if (p.main) error("main is designated twice");
        p.main = name().text;
      } else {
        error("expected data, def or main");
      }
    }
    return p;
  }

  template <class T>
  T whole(T (Parser::*f)()) {
    T out = (this->*f)();
    if (!at_end()) error("unexpected trailing input");
    return out;
  }

  sf::TypePtr sftype() {
    sf::TypePtr a = sfatomtype();
    if (accept("->")) return sf::arrow(a, sftype());
    return a;
  }

  ml::TypePtr mltype() {
    if (at("{")) {
      ++pos_;
      std::vector<std::string> vars;
      while (!accept("}")) vars.push_back(name().text);
      return ml::forall(std::move(vars), mltype());
    }
    ml::TypePtr a = mlatom();
    if (accept("->")) return ml::arrow(a, mltype());
    return a;
  }

  ml::ExprPtr expr() {
    SourceLoc loc = peek().loc;
    if (at_name("fun")) {
      ++pos_;
      std::string f = name().text;
      std::string x = name().text;
      expect("->");
      return ml::fun(f, x, expr(), loc);
    }
    if (at_name("let")) {
      ++pos_;
      std::string x = name().text;
      expect("=");
      auto i = expr();
      expect_name("in");
      return ml::let(x, i, expr(), loc);
    }
    if (at_name("match")) {
      ++pos_;
      auto i = expr();
      expect_name("with");
      if (!at("|")) error("expected a branch");
      if (peek(1).text == "[") {
        std::vector<ml::CBranch> bs;
        while (at("|")) {
          ++pos_;
          ml::CBranch b;
          b.loc = peek().loc;
          expect("[");
          b.ctx = lit_ctx();
          b.pattern = to_pattern(sfterm());
          expect("]");
          expect("->");
          b.body = expr();
          bs.push_back(std::move(b));
        }
        return ml::cmatch(i, std::move(bs), loc);
      }
      std::vector<ml::Branch> bs;
      while (at("|")) {
        ++pos_;
        ml::Branch b;
        b.pattern = pattern();
        expect("->");
        b.body = expr();
        bs.push_back(std::move(b));
      }
      return ml::match(i, std::move(bs), loc);
    }
    return app_expr();
  }

  sf::TermPtr sfterm() {
    if (accept("\\")) {
      std::string x = name().text;
      expect(".");
      return sf::lam(x, sfterm());
    }
    SourceLoc loc = peek().loc;
    if (peek().kind == Tok::Name && !is_keyword(peek().text) && sig_.has_constructor(peek().text)) {
      std::string c = name().text;
      std::vector<sf::TermPtr> args;
      while (starts_sfatom()) args.push_back(sfatom());
      return sf::const_app(c, std::move(args));
    }
    sf::TermPtr m = sfatom();
    if (starts_sfatom()) fail(Code::SyntaxError, "only constructors take arguments in SF terms", loc);
    return m;
  }

  sf::PatternPtr sfpattern() { return to_pattern(sfterm()); }

private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at_end() const { return peek().kind == Tok::End; }
  bool at(const char* sym) const { return peek().kind == Tok::Sym && peek().text == sym; }
  bool at_name(const char* kw) const { return peek().kind == Tok::Name && peek().text == kw; }
  bool accept(const char* sym) {
    if (!at(sym)) return false;
    ++pos_;
    return true;
  }
  [[noreturn]] void error(const std::string& msg) const {
    std::string got = at_end() ? "end of input" : "'" + peek().text + "'";
    fail(Code::SyntaxError, msg + ", found " + got, peek().loc);
  }
  void expect(const char* sym) {
    if (!accept(sym)) error(std::string("expected '") + sym + "'");
  }
  void expect_name(const char* kw) {
    if (!at_name(kw)) error(std::string("expected ") + kw);
    ++pos_;
  }
  Token name() {
    if (peek().kind != Tok::Name || is_keyword(peek().text)) error("expected a name");
    return toks_[pos_++];
  }
  std::size_t nat() {
    if (peek().kind != Tok::Nat) error("expected a number");
    return std::stoul(toks_[pos_++].text);
  }

  // Index of the matching closer for the bracket at `pos_`, or npos.
  bool group_has_turnstile() const {
    int depth = 0;
    for (std::size_t i = pos_; i < toks_.size(); ++i) {
      const Token& t = toks_[i];
      if (t.kind != Tok::Sym) continue;
      if (t.text == "(" || t.text == "[" || t.text == "{") ++depth;
      if (t.text == ")" || t.text == "]" || t.text == "}") {
        if (--depth == 0) return false;
      }
      if (t.text == "|-" && depth == 1) return true;
    }
    return false;
  }

  sf::TypePtr sfatomtype() {
    if (accept("[")) {
      auto t = sftype();
      expect("]");
      return sf::boxed(t);
    }
    if (accept("{")) {
      auto t = sftype();
      expect("}");
      return sf::boxed(t);
    }
    if (accept("(")) {
      auto t = sftype();
      expect(")");
      return t;
    }
    return sf::atom(name().text);
  }

  // ctx := "." | item ("," item)*  where a leading bare name is the context variable.
  sf::Ctx ctx(const char* stop1, const char* stop2) {
    sf::Ctx c;
    if (accept(".") || at(stop1) || at(stop2)) return c;
    bool first = true;
    do {
      Token n = name();
      if (accept(":")) {
        c.entries.push_back({n.text == "_" ? "" : n.text, name().text});
      } else if (first) {
        c.var = n.text;
      } else {
        fail(Code::SyntaxError, "context entry " + n.text + " needs a type", n.loc);
      }
      first = false;
    } while (accept(","));
    return c;
  }

  sf::ContextualType ctx_type_body(const char* close) {
    sf::Ctx c;
    if (group_has_turnstile_here(close)) {
      c = ctx("|-", close);
      expect("|-");
    }
    SourceLoc loc = peek().loc;
    sf::TypePtr a = sftype();
    if (!a->is_atom()) fail(Code::NonAtomicContextualType, "contextual types must have an atomic type", loc);
    expect(close);
    return {c, a->atom};
  }

  bool group_has_turnstile_here(const char* close) const {
    int depth = 0;
    for (std::size_t i = pos_; i < toks_.size(); ++i) {
      const Token& t = toks_[i];
      if (t.kind == Tok::End) return false;
      if (t.kind != Tok::Sym) continue;
      if (depth == 0 && t.text == close) return false;
      if (depth == 0 && t.text == "|-") return true;
      if (t.text == "(" || t.text == "[" || t.text == "{") ++depth;
      if (t.text == ")" || t.text == "]" || t.text == "}") --depth;
    }
    return false;
  }

  ml::TypePtr mlatom() {
    if (accept("#")) {
      expect("[");
      return ml::param_type(ctx_type_body("]"));
    }
    if (accept("[")) return ml::ctx_type(ctx_type_body("]"));
    if (at("(")) {
      if (group_has_turnstile()) {
        ++pos_;
        return ml::ctx_type(ctx_type_body(")"));
      }
      ++pos_;
      auto t = mltype();
      expect(")");
      return t;
    }
    std::string d = name().text;
    std::vector<sf::Ctx> idx;
    if (accept("(")) {
      do idx.push_back(ctx(";", ")"));
      while (accept(";"));
      expect(")");
    }
    return ml::data_type(d, std::move(idx));
  }

  ml::DataDecl data_decl() {
    ml::DataDecl d;
    d.loc = peek().loc;
    expect_name("data");
    d.name = name().text;
    if (accept("[")) {
      d.arity = nat();
      expect("]");
    }
    expect("=");
    if (!at("|")) error("expected '|' before a constructor");
    while (accept("|")) {
      ml::DataCon c;
      c.loc = peek().loc;
      Token n = name();
      if (!is_upper(n.text)) fail(Code::SyntaxError, "constructor names start with a capital letter", n.loc);
      c.name = n.text;
      if (accept(":")) {
        SourceLoc loc = peek().loc;
        ml::TypePtr t = mltype();
        if (t->kind == ml::Type::Kind::Forall) {
          c.ctx_params = t->vars;
          t = t->body;
        }
        while (t->kind == ml::Type::Kind::Arrow) {
          c.args.push_back(t->dom);
          t = t->cod;
        }
        if (t->kind != ml::Type::Kind::Data || t->name != d.name)
          fail(Code::SyntaxError, c.name + " must build a value of " + d.name, loc);
        c.indices = t->indices;
      } else {
        while (starts_mlatom()) c.args.push_back(mlatom());
      }
      d.cons.push_back(std::move(c));
    }
    return d;
  }

  bool starts_mlatom() const {
    if (at("#") || at("[") || at("(")) return true;
    return peek().kind == Tok::Name && !is_keyword(peek().text) && !is_upper(peek().text);
  }

  ml::PatternPtr pattern() {
    if (peek().kind == Tok::Name && is_upper(peek().text)) {
      Token k = name();
      std::vector<std::string> binders;
      if (accept("{")) {
        do binders.push_back(name().text);
        while (accept(";"));
        expect("}");
      }
      std::vector<ml::PatternPtr> args;
      while (starts_patatom()) args.push_back(patatom());
      return ml::pcon(k.text, std::move(args), std::move(binders), k.loc);
    }
    return patatom();
  }

  bool starts_patatom() const { return at("(") || (peek().kind == Tok::Name && !is_keyword(peek().text)); }

  ml::PatternPtr patatom() {
    if (accept("(")) {
      auto p = pattern();
      expect(")");
      return p;
    }
    Token n = name();
    if (is_upper(n.text)) return ml::pcon(n.text, {}, {}, n.loc);
    return ml::pvar(n.text, n.loc);
  }

  std::vector<sf::Ctx> ctx_args() {
    std::vector<sf::Ctx> cs;
    do cs.push_back(ctx(";", "}"));
    while (accept(";"));
    expect("}");
    return cs;
  }

  bool starts_atom() const {
    if (at("(") || at("[")) return true;
    return peek().kind == Tok::Name && !is_keyword(peek().text);
  }

  ml::ExprPtr app_expr() {
    SourceLoc loc = peek().loc;
    ml::ExprPtr head;
    if (peek().kind == Tok::Name && is_upper(peek().text)) {
      std::string k = name().text;
      std::vector<sf::Ctx> cs;
      bool explicit_ctxs = false;
      if (accept("{")) {
        cs = ctx_args();
        explicit_ctxs = true;
      }
      std::vector<ml::ExprPtr> args;
      while (starts_atom()) args.push_back(atom());
      return ml::con_app(k, std::move(args), std::move(cs), explicit_ctxs, loc);
    }
    head = atom();
    while (starts_atom()) {
      SourceLoc aloc = peek().loc;
      head = ml::app(head, atom(), aloc);
    }
    return head;
  }

  ml::ExprPtr atom() {
    SourceLoc loc = peek().loc;
    if (accept("(")) {
      auto e = expr();
      if (accept(":")) {
        auto t = mltype();
        expect(")");
        return ml::ann(e, t, loc);
      }
      expect(")");
      return e;
    }
    if (accept("[")) {
      ml::LitCtx lit = lit_ctx();
      auto m = sfterm();
      expect("]");
      return ml::ctx_obj(std::move(lit), m, loc);
    }
    Token n = name();
    if (is_upper(n.text)) return ml::con_app(n.text, {}, {}, false, loc);
    ml::ExprPtr v = ml::var(n.text, loc);
    if (at("{")) {
      ++pos_;
      return ml::inst(v, ctx_args(), loc);
    }
    return v;
  }

  // After '[': the optional `names |-` part of a literal or branch.
  ml::LitCtx lit_ctx() {
    ml::LitCtx lit;
    if (!group_has_turnstile_inside()) return lit;
    lit.turnstile = true;
    if (accept(".") || at("|-")) {
      expect("|-");
      return lit;
    }
    do {
      lit.names.push_back(name().text);
      lit.atoms.push_back(accept(":") ? name().text : "");
    } while (accept(","));
    expect("|-");
    bool any_atom = false;
    for (const auto& a : lit.atoms) any_atom = any_atom || !a.empty();
    if (!any_atom) lit.atoms.clear();
    return lit;
  }

  bool group_has_turnstile_inside() const {
    int depth = 0;
    for (std::size_t i = pos_; i < toks_.size(); ++i) {
      const Token& t = toks_[i];
      if (t.kind == Tok::End) return false;
      if (t.kind != Tok::Sym) continue;
      if (t.text == "(" || t.text == "[" || t.text == "{") ++depth;
      if (t.text == ")" || t.text == "]" || t.text == "}") {
        if (depth-- == 0) return false;
      }
      if (t.text == "|-" && depth == 0) return true;
    }
    return false;
  }

  bool starts_sfatom() const {
    if (at("'") || at("#") || at("(") || at("{")) return true;
    return peek().kind == Tok::Name && (!is_keyword(peek().text) || peek().text == "box");
  }

  sf::TermPtr sfatom() {
    if (accept("'")) {
      std::string u = name().text;
      if (accept("[")) {
        sf::Subst s = subst();
        expect("]");
        return sf::clo(sf::qvar(u), std::move(s));
      }
      return sf::qvar(u);
    }
    if (at("#")) {
      unsigned k = 0;
      while (accept("#")) ++k;
      return sf::pvar(name().text, k);
    }
    if (accept("(")) {
      auto m = sfterm();
      expect(")");
      return m;
    }
    if (accept("{")) {
      auto m = sfterm();
      expect("}");
      return sf::box(m);
    }
    if (at_name("box")) {
      ++pos_;
      return sf::box(sfatom());
    }
    Token n = name();
    if (sig_.has_constructor(n.text)) return sf::const_app(n.text);
    return sf::bvar(n.text);
  }

  sf::Subst subst() {
    sf::Subst s;
    if (at("]")) return s;
    if (at_name("_")) {
      ++pos_;
      s.elided = true;
      if (!accept(";")) return s;
    } else if (accept("^")) {
      s.shift = nat();
      if (!accept(";")) return s;
    } else {
      s.elided = true;
    }
    do s.entries.push_back(sfterm());
    while (accept(";"));
    return s;
  }

  sf::PatternPtr to_pattern(const sf::TermPtr& m) {
    using K = sf::Term::Kind;
    switch (m->kind) {
      case K::Lam: return sf::plam(m->name, to_pattern(m->body));
      case K::Box: return sf::pbox(to_pattern(m->body));
      case K::BVar: return sf::pbvar(m->name);
      case K::QVar: return sf::pqvar(m->name);
      case K::PVar: return sf::ppvar(m->name, m->weakening);
      case K::Const: {
        std::vector<sf::PatternPtr> args;
        for (const auto& a : m->args) args.push_back(to_pattern(a));
        return sf::pconst(m->name, std::move(args));
      }
      case K::Clo: fail(Code::SyntaxError, "substitutions cannot occur in patterns", peek().loc);
    }
    fail(Code::SyntaxError, "bad pattern", peek().loc);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  sf::Signature sig_;
};

}  // namespace

ml::Program parse_program(const std::string& text) {
  Parser p(text, {});
  return p.whole(&Parser::program);
}

sf::TermPtr parse_sf_term(const sf::Signature& sig, const std::string& text) {
  Parser p(text, sig);
  return p.whole(&Parser::sfterm);
}

sf::PatternPtr parse_sf_pattern(const sf::Signature& sig, const std::string& text) {
  Parser p(text, sig);
  return p.whole(&Parser::sfpattern);
}

ml::TypePtr parse_ml_type(const sf::Signature& sig, const std::string& text) {
  Parser p(text, sig);
  return p.whole(&Parser::mltype);
}

ml::ExprPtr parse_expr(const sf::Signature& sig, const std::string& text) {
  Parser p(text, sig);
  return p.whole(&Parser::expr);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Code::IoError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace sfbox::driver

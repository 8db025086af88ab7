#include <filesystem>
#include <functional>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "sfbox/coreml/check.hpp"
#include "sfbox/coreml/eval.hpp"
#include "sfbox/coreml/print.hpp"
#include "sfbox/driver/parse.hpp"
#include "sfbox/driver/stack.hpp"
#include "sfbox/sf/alpha.hpp"
#include "sfbox/sf/print.hpp"

using namespace sfbox;

namespace {

std::string corpus(const std::string& name) { return driver::read_file(std::string(SFBOX_CORPUS_DIR) + "/" + name); }

// The rewrite corpus program with its main replaced.
std::string rewrite_with(const std::string& extra) {
  std::string text = corpus("rewrite.sfb");
  text = text.substr(0, text.find("def sugar"));
  return text + extra;
}

Code code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a diagnostic");
  return Code::InternalInvariantViolation;
}

ml::ValuePtr run(const std::string& text, std::size_t fuel = 100000) {
  auto c = ml::check_program(driver::parse_program(text));
  ml::Fuel f(fuel);
  return driver::with_big_stack([&] { return ml::run_main(c.program, f); });
}

sf::TermPtr main_term(const std::string& text) {
  auto v = run(text);
  REQUIRE(v->kind == ml::Value::Kind::Ctx);
  return v->obj.term;
}

const char* kSig = R"(
spec {
  tm : type.
  cst : tm.
  app : tm -> tm -> tm.
}

data nat =
  | Z
  | S nat

data bool =
  | True
  | False
)";

std::set<std::string> free_names(const sf::TermPtr& m) {
  std::set<std::string> out;
  std::function<void(const sf::TermPtr&, std::set<std::string>)> go = [&](const sf::TermPtr& t, std::set<std::string> bound) {
    if (t->kind == sf::Term::Kind::BVar && !bound.count(t->name)) out.insert(t->name);
    if (t->kind == sf::Term::Kind::Lam) {
      bound.insert(t->name);
      go(t->body, bound);
    }
    for (const auto& a : t->args) go(a, bound);
  };
  go(m, {});
  return out;
}

// The rewrite program executed directly on named terms, following its text branch by branch.
sf::TermPtr rewrite_oracle(const sf::TermPtr& m) {
  using sf::const_app;
  if (m->kind == sf::Term::Kind::BVar) return m;
  if (m->kind == sf::Term::Kind::Lam) return sf::lam(m->name, rewrite_oracle(m->body));
  const auto& c = m->name;
  const auto& a = m->args;
  if (c == "cst") return m;
  if (c == "letpair") {
    auto mm = rewrite_oracle(a[0]);
    const auto& f = a[1];
    const auto& s = f->body;
    auto n = oracle::naive_subst({{f->name, const_app("fst", {mm})}, {s->name, const_app("snd", {mm})}}, free_names(mm), s->body);
    return rewrite_oracle(n);
  }
  if (c == "letv") return rewrite_oracle(oracle::naive_subst({{a[1]->name, a[0]}}, free_names(a[0]), a[1]->body));
  if (c == "lam") return const_app("lam", {rewrite_oracle(a[0])});
  std::vector<sf::TermPtr> args;
  for (const auto& x : a) args.push_back(rewrite_oracle(x));
  return const_app(c, args);
}

}  // namespace

TEST_CASE("identity function checks at a data type") {
  auto p = driver::parse_program(kSig);
  ml::check_declarations(p);
  auto nat = driver::parse_ml_type(p.sf, "nat -> nat");
  CHECK_NOTHROW(ml::check_expr(p, {}, driver::parse_expr(p.sf, "fun f x -> x"), nat));
  auto bad = driver::parse_ml_type(p.sf, "nat -> bool");
  CHECK(code_of([&] { ml::check_expr(p, {}, driver::parse_expr(p.sf, "fun f x -> x"), bad); }) == Code::TypeMismatch);
}

TEST_CASE("contextual objects delegate to the SF checker") {
  auto p = driver::parse_program(kSig);
  auto e = driver::parse_expr(p.sf, "[x:tm |- app x x]");
  CHECK_NOTHROW(ml::check_expr(p, {}, e, driver::parse_ml_type(p.sf, "[x:tm |- tm]")));
  CHECK(code_of([&] { ml::check_expr(p, {}, e, driver::parse_ml_type(p.sf, "[tm]")); }) == Code::ContextMismatch);
  CHECK(code_of([&] {
          ml::check_expr(p, {}, driver::parse_expr(p.sf, "[x:tm |- app x]"), driver::parse_ml_type(p.sf, "[x:tm |- tm]"));
        }) == Code::SpineArity);
}

TEST_CASE("rewrite checks at three concrete contexts") {
  auto text = rewrite_with(R"(
def r0 : [tm] -> [tm] = rewrite{.}
def r1 : [x:tm |- tm] -> [x:tm |- tm] = rewrite{x:tm}
def r2 : [x:tm, y:tm |- tm] -> [x:tm, y:tm |- tm] = rewrite{x:tm, y:tm}
def i2 : [x:tm, y:tm |- tm] -> [x:tm, y:tm |- tm] = fun i2 t -> rewrite t
def e2 : [x:tm, y:tm |- tm] = r2 [x, y |- letv x (\z. pair z y)]

main e2
)");
  auto v = run(text);
  CHECK(sf::show(v->obj) == "[x, y |- pair x y]");
}

TEST_CASE("synthesis of neutral expressions") {
  auto p = driver::parse_program(kSig);
  ml::check_declarations(p);
  auto nat = driver::parse_ml_type(p.sf, "nat");
  ml::Gamma g;
  g.vars.push_back({"n", nat});
  CHECK(ml::type_equal(ml::infer_expr(p, g, ml::var("n")).second, nat));
  CHECK(ml::type_equal(ml::infer_expr(p, g, driver::parse_expr(p.sf, "S (S n)")).second, nat));
  auto annot = driver::parse_expr(p.sf, "([cst] : [tm])");
  CHECK(ml::show(ml::infer_expr(p, g, annot).second) == "[. |- tm]");
  CHECK(code_of([&] { ml::infer_expr(p, g, ml::var("m")); }) == Code::UnboundVar);
  CHECK(code_of([&] { ml::infer_expr(p, g, driver::parse_expr(p.sf, "S Z Z")); }) == Code::ArityError);
  CHECK(code_of([&] { ml::infer_expr(p, g, driver::parse_expr(p.sf, "fun f x -> x")); }) == Code::CannotSynthesize);
}

TEST_CASE("branches") {
  std::string base = kSig;
  CHECK(ml::show(run(base + R"(
def t : bool = match [cst] with | [cst] -> True | ['o] -> False
main t
)")) == "True");
  CHECK(ml::show(run(base + R"(
def t : bool = match [app cst cst] with | [cst] -> True | ['o] -> False
main t
)")) == "False");
  CHECK(code_of([&] {
          ml::check_program(driver::parse_program(base + "def t : bool = match Z with | [cst] -> True\nmain t\n"));
        }) == Code::PatternTypeMismatch);
  CHECK(code_of([&] {
          ml::check_program(driver::parse_program(base + "def t : bool = match [cst] with | Z -> True\nmain t\n"));
        }) == Code::PatternTypeMismatch);
}

TEST_CASE("##v binds a variable of the shorter context") {
  auto p = driver::parse_program(std::string(kSig) + R"(
def f : {g} [g, x:tm |- tm] -> [g |- tm] =
  fun f t ->
    match t with
    | [_, x |- ##v] -> [#v]
    | [_, x |- 'o] -> [cst]

def e : [y:tm |- tm] = f [y, x |- y]

main e
)");
  auto c = ml::check_program(p);
  const auto& br = c.program.find_def("f")->body->body->cbranches[0];
  REQUIRE(br.binder_names.size() == 1);
  CHECK(br.binder_names[0] == "v");
  CHECK(ml::show(br.binder_types[0]) == "#[g |- tm]");
  ml::Fuel fuel(1000);
  CHECK(sf::show(ml::run_main(c.program, fuel)->obj) == "[y |- y]");
}

TEST_CASE("evaluation golds against the naive substitution oracle") {
  auto letv = rewrite_with("def e : [tm] = rewrite [letv cst (\\x. pair x x)]\nmain e\n");
  auto got = main_term(letv);
  auto sig = driver::parse_program(letv).sf;
  auto gold = driver::parse_sf_term(sig, "pair cst cst");
  CHECK(sf::alpha_eq(got, gold));
  CHECK(sf::alpha_eq(rewrite_oracle(driver::parse_sf_term(sig, "letv cst (\\x. pair x x)")), gold));

  auto letpair = rewrite_with("def e : [tm] = rewrite [letpair (pair cst cst) (\\f. \\s. app f s)]\nmain e\n");
  auto gold2 = driver::parse_sf_term(sig, "app (fst (pair cst cst)) (snd (pair cst cst))");
  CHECK(sf::alpha_eq(main_term(letpair), gold2));
  CHECK(sf::alpha_eq(rewrite_oracle(driver::parse_sf_term(sig, "letpair (pair cst cst) (\\f. \\s. app f s)")), gold2));
}

TEST_CASE("rewrite agrees with the oracle on nested sugar") {
  const char* inputs[] = {
      "lam (\\y. letv y (\\x. app x x))",
      "letv (lam (\\y. y)) (\\f. letpair (pair f cst) (\\a. \\b. app a b))",
      "letpair (letv cst (\\x. pair x x)) (\\f. \\s. lam (\\z. app (app f z) s))",
      "app (letv cst (\\x. x)) (lam (\\x. letv x (\\y. lam (\\x. pair x y))))",
  };
  for (const char* in : inputs) {
    auto text = rewrite_with(std::string("def e : [tm] = rewrite [") + in + "]\nmain e\n");
    auto sig = driver::parse_program(text).sf;
    INFO(in);
    CHECK(sf::alpha_eq(main_term(text), rewrite_oracle(driver::parse_sf_term(sig, in))));
  }
}

TEST_CASE("match_ml") {
  auto k = [](std::string n, std::vector<ml::ValuePtr> a = {}) { return ml::data_value(std::move(n), std::move(a)); };
  auto v = k("S", {k("Z")});

  auto r = ml::match_ml(ml::pvar("x"), v, nullptr);
  REQUIRE(r);
  CHECK(ml::value_equal(ml::lookup_value(*r, "x"), v));

  auto pair = [&](std::string n, ml::PatternPtr a, ml::PatternPtr b) { return ml::pcon(std::move(n), {a, b}); };
  CHECK_FALSE(ml::match_ml(pair("K", ml::pvar("x"), ml::pvar("y")), k("M", {v, v}), nullptr));

  // Oracle: substituting the bindings back into the pattern rebuilds the value.
  auto pat = pair("K", ml::pvar("x"), ml::pcon("Z", {}));
  auto val = k("K", {v, k("Z")});
  auto b = ml::match_ml(pat, val, nullptr);
  REQUIRE(b);
  std::function<ml::ValuePtr(const ml::PatternPtr&)> rebuild = [&](const ml::PatternPtr& p) -> ml::ValuePtr {
    if (p->kind == ml::Pattern::Kind::Var) return ml::lookup_value(*b, p->name);
    std::vector<ml::ValuePtr> args;
    for (auto& a : p->args) args.push_back(rebuild(a));
    return k(p->name, args);
  };
  CHECK(ml::value_equal(rebuild(pat), val));
  CHECK_FALSE(ml::match_ml(pat, k("K", {v, k("S", {k("Z")})}), nullptr));
}

TEST_CASE("wildcard patterns bind nothing and may repeat") {
  auto v = run(std::string(kSig) + R"(
data two =
  | Two nat nat

def t : nat = match Two Z (S Z) with | Two _ _ -> S (S Z)
main t
)");
  CHECK(ml::show(v) == "S (S Z)");
}

TEST_CASE("runtime failures") {
  std::string base = kSig;
  CHECK(code_of([&] { run(base + "def t : bool = match [app cst cst] with | [cst] -> True\nmain t\n"); }) ==
        Code::MatchFailure);
  CHECK(code_of([&] { run(base + "def t : nat -> nat = fun f x -> f x\ndef u : nat = t Z\nmain u\n"); }) ==
        Code::FuelExhausted);
  CHECK(code_of([&] { run(corpus("rewrite.sfb"), 1); }) == Code::FuelExhausted);
}

TEST_CASE("corpus programs evaluate to values of their main type, deterministically") {
  for (const char* f : {"rewrite.sfb", "path.sfb", "cloconv.sfb"}) {
    INFO(f);
    auto c = ml::check_program(driver::parse_program(corpus(f)));
    ml::Fuel f1(100000), f2(100000);
    auto v1 = driver::with_big_stack([&] { return ml::run_main(c.program, f1); });
    auto v2 = driver::with_big_stack([&] { return ml::run_main(c.program, f2); });
    CHECK(ml::value_equal(v1, v2));
    CHECK(ml::check_value(c.program, v1, c.program.find_def(*c.program.main)->type));
  }
  CHECK(ml::show(run(corpus("path.sfb"))) == "PCons AppR (PCons InLam (PCons AppR (PCons Here PNil)))");
}

TEST_CASE("printing parses back to the same program") {
  std::vector<std::filesystem::path> files;
  for (auto& e : std::filesystem::directory_iterator(SFBOX_CORPUS_DIR))
    if (e.path().extension() == ".sfb") files.push_back(e.path());
  for (auto& e : std::filesystem::directory_iterator(std::string(SFBOX_CORPUS_DIR) + "/mutants"))
    files.push_back(e.path());
  CHECK(files.size() >= 23);
  for (auto& f : files) {
    INFO(f.string());
    ml::Program p;
    try {
      p = driver::parse_program(driver::read_file(f.string()));
    } catch (const Error&) {
      continue;  // rejected while parsing
    }
    auto printed = ml::show(p);
    CHECK(ml::show(driver::parse_program(printed)) == printed);
  }
}

TEST_CASE("corpus mutants are rejected with their designated codes") {
  std::size_t n = 0;
  for (auto& e : std::filesystem::directory_iterator(std::string(SFBOX_CORPUS_DIR) + "/mutants")) {
    auto text = driver::read_file(e.path().string());
    auto first = text.substr(0, text.find('\n'));
    REQUIRE(first.rfind("-- expect: ", 0) == 0);
    auto expected = first.substr(11);
    std::string got = "accepted";
    try {
      ml::check_program(driver::parse_program(text));
    } catch (const Error& err) {
      got = std::string(code_name(err.code()));
    }
    INFO(e.path().string());
    CHECK(got == expected);
    ++n;
  }
  CHECK(n >= 20);
}

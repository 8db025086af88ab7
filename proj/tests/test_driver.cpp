#include <filesystem>
#include <functional>
#include <random>

#include "doctest.h"
#include "sfbox/coreml/check.hpp"
#include "sfbox/coreml/eval.hpp"
#include "sfbox/coreml/print.hpp"
#include "sfbox/driver/dump.hpp"
#include "sfbox/driver/gen.hpp"
#include "sfbox/driver/parse.hpp"
#include "sfbox/driver/props.hpp"
#include "sfbox/driver/stack.hpp"
#include "sfbox/sf/print.hpp"
#include "sfbox/sf/typing.hpp"
#include "sfbox/target/syntax.hpp"
#include "sfbox/translate/translate.hpp"

using namespace sfbox;
namespace gen = sfbox::driver::gen;

namespace {

std::string corpus_path(const std::string& name) { return std::string(SFBOX_CORPUS_DIR) + "/" + name; }
std::string corpus(const std::string& name) { return driver::read_file(corpus_path(name)); }

const char* kCorpus[] = {"rewrite.sfb", "path.sfb", "cloconv.sfb"};

Code code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a diagnostic");
  return Code::InternalInvariantViolation;
}

sf::Signature tm_sig() { return gen::tm_signature(); }

}  // namespace

TEST_CASE("parser goldens for SF terms and patterns") {
  auto sig = tm_sig();
  CHECK(sf::show(driver::parse_sf_term(sig, "app x (lam (\\y. y))")) == "app x (lam (\\y. y))");
  CHECK(sf::show(driver::parse_sf_term(sig, "letv cst (\\x. pair x x)")) == "letv cst (\\x. pair x x)");
  auto clo = driver::parse_sf_term(sig, "'m[^1; cst]");
  REQUIRE(clo->kind == sf::Term::Kind::Clo);
  CHECK(clo->body->kind == sf::Term::Kind::QVar);
  CHECK(clo->subst.shift == 1);
  CHECK(clo->subst.entries.size() == 1);
  CHECK_FALSE(clo->subst.elided);
  auto elided = driver::parse_sf_term(sig, "'n[_; x; y]");
  CHECK(elided->subst.elided);
  CHECK(elided->subst.entries.size() == 2);
  auto bare = driver::parse_sf_term(sig, "'n['m]");
  CHECK(bare->subst.elided);
  auto pv = driver::parse_sf_term(sig, "##v");
  CHECK(pv->kind == sf::Term::Kind::PVar);
  CHECK(pv->weakening == 2);
  // a name the spec declares is a constructor, any other is a variable
  CHECK(driver::parse_sf_term(sig, "cst")->kind == sf::Term::Kind::Const);
  CHECK(driver::parse_sf_term(sig, "cstx")->kind == sf::Term::Kind::BVar);

  auto r = driver::parse_sf_pattern(sig, "letpair 'm (\\f. \\s. 'n)");
  CHECK(sf::show(r) == "letpair 'm (\\f. \\s. 'n)");
  CHECK(driver::parse_sf_pattern(sig, "#x")->kind == sf::Pattern::Kind::PVar);
}

TEST_CASE("parser goldens for ML types and expressions") {
  auto sig = tm_sig();
  CHECK(ml::show(driver::parse_ml_type(sig, "[x:tm |- tm] -> [tm]")) == "[x:tm |- tm] -> [. |- tm]");
  CHECK(ml::show(driver::parse_ml_type(sig, "{g} [g |- tm] -> [g |- tm]")) == "{g} [g |- tm] -> [g |- tm]");
  CHECK(ml::show(driver::parse_ml_type(sig, "#[g, x:tm |- tm]")) == "#[g, x:tm |- tm]");

  auto e = driver::parse_expr(sig, "[x:tm |- 'm[^1]]");
  REQUIRE(e->kind == ml::Expr::Kind::CtxObj);
  CHECK(e->lit.turnstile);
  CHECK(e->lit.names == std::vector<std::string>{"x"});
  CHECK(e->lit.atoms == std::vector<std::string>{"tm"});
  REQUIRE(e->term->kind == sf::Term::Kind::Clo);
  CHECK(e->term->subst.shift == 1);
  CHECK(e->term->subst.entries.empty());

  auto m = driver::parse_expr(sig, "match t with | [_, x |- #v] -> t | ['o] -> t");
  REQUIRE(m->kind == ml::Expr::Kind::CMatch);
  CHECK(m->cbranches.size() == 2);
  CHECK(m->cbranches[0].ctx.names == std::vector<std::string>{"_", "x"});

  auto i = driver::parse_expr(sig, "f{g, y:tm} [cst]");
  REQUIRE(i->kind == ml::Expr::Kind::App);
  REQUIRE(i->fn->kind == ml::Expr::Kind::Inst);
  REQUIRE(i->fn->ctxs.size() == 1);
  CHECK(sf::show(i->fn->ctxs[0]) == "g, y:tm");

  CHECK(code_of([&] { driver::parse_expr(sig, "[x |- "); }) == Code::SyntaxError);
  CHECK(code_of([&] { driver::parse_program("def : nat"); }) == Code::SyntaxError);
}

TEST_CASE("source programs survive a JSON round trip") {
  for (const char* f : kCorpus) {
    INFO(f);
    auto p = driver::parse_program(corpus(f));
    auto j = driver::dump(p);
    CHECK(j["schema"] == driver::kSchemaVersion);
    CHECK(j["kind"] == "source_program");
    auto back = driver::load_source(j);
    CHECK(ml::show(back) == ml::show(p));
    CHECK(driver::dump(back) == j);
    // the reloaded program still checks
    CHECK_NOTHROW(ml::check_program(back));
    // and through text
    auto reparsed = driver::load_source(driver::Json::parse(j.dump()));
    CHECK(ml::show(reparsed) == ml::show(p));
  }
}

TEST_CASE("translated programs survive a JSON round trip") {
  for (const char* f : kCorpus) {
    INFO(f);
    auto c = ml::check_program(driver::parse_program(corpus(f)));
    auto t = translate::trans_program(c.program).program;
    auto j = driver::dump(t);
    CHECK(j["kind"] == "target_program");
    auto back = driver::load_target(driver::Json::parse(j.dump()));
    CHECK(target::show(back) == target::show(t));
    CHECK(driver::dump(back) == j);
  }
}

TEST_CASE("malformed JSON is a syntax error") {
  auto p = driver::parse_program(corpus("rewrite.sfb"));
  auto j = driver::dump(p);

  auto wrong_schema = j;
  wrong_schema["schema"] = driver::kSchemaVersion + 1;
  CHECK(code_of([&] { driver::load_source(wrong_schema); }) == Code::SyntaxError);

  CHECK(code_of([&] { driver::load_target(j); }) == Code::SyntaxError);

  auto missing = j;
  missing.erase("defs");
  CHECK(code_of([&] { driver::load_source(missing); }) == Code::SyntaxError);

  auto bad_node = j;
  bad_node["defs"][0]["body"]["kind"] = "no_such_expression";
  CHECK(code_of([&] { driver::load_source(bad_node); }) == Code::SyntaxError);

  auto bad_type = j;
  bad_type["defs"][0]["body"] = 7;
  CHECK(code_of([&] { driver::load_source(bad_type); }) == Code::SyntaxError);

  CHECK(code_of([&] { driver::load_source(driver::Json::array()); }) == Code::SyntaxError);
}

TEST_CASE("generated SF terms, substitutions and patterns are well typed") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    std::mt19937_64 rng(seed);
    auto sig = seed % 2 ? gen::cloconv_signature() : gen::tm_signature();
    gen::SfGen g(sig, rng);
    gen::Names names;
    auto psi = g.context(3, names);
    auto a = g.atom();
    auto m = g.term(psi, a, 4);
    INFO(sf::show(m));
    CHECK_NOTHROW(sf::check_sf_term(sig, sf::empty_ambient(), psi, m, sf::atom(a)));
    // the surface form parses back to the same term
    CHECK(sf::show(driver::parse_sf_term(sig, gen::surface(m))) == sf::show(m));

    auto [sigma, phi] = g.subst_into(psi, 2, names);
    CHECK_NOTHROW(sf::check_sf_subst(sig, sf::empty_ambient(), psi, sigma, phi));

    auto [r, holes] = g.pattern(psi, a, 3, names);
    INFO(sf::show(r));
    auto bound = sf::check_sf_pattern(sig, psi, r, sf::atom(a));
    CHECK(bound.size() == holes.size());
    CHECK(sf::show(driver::parse_sf_pattern(sig, gen::surface(r))) == sf::show(r));
  }
}

TEST_CASE("generated programs check, run and print back to themselves") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    std::mt19937_64 rng(seed);
    auto text = gen::program(rng);
    INFO(text);
    auto p = driver::parse_program(text);
    auto c = ml::check_program(p);
    CHECK(c.program.main);
    auto printed = ml::show(p);
    CHECK(ml::show(driver::parse_program(printed)) == printed);
    Fuel f(100000);
    CHECK_NOTHROW(driver::with_big_stack([&] { return ml::run_main(c.program, f); }));
  }
}

TEST_CASE("generation and evaluation are deterministic") {
  for (std::uint64_t seed : {3u, 17u, 99u}) {
    std::mt19937_64 a(seed), b(seed);
    auto ta = gen::program(a), tb = gen::program(b);
    CHECK(ta == tb);
    auto ca = ml::check_program(driver::parse_program(ta));
    auto cb = ml::check_program(driver::parse_program(tb));
    CHECK(ml::show(ca.program) == ml::show(cb.program));
    Fuel fa(100000), fb(100000);
    auto va = driver::with_big_stack([&] { return ml::run_main(ca.program, fa); });
    auto vb = driver::with_big_stack([&] { return ml::run_main(cb.program, fb); });
    CHECK(ml::show(va) == ml::show(vb));
    CHECK(fa.left == fb.left);
  }
  CHECK(driver::props::generate_programs(5, 10) == driver::props::generate_programs(5, 10));
}

TEST_CASE("property suites pass on a small sample") {
  namespace P = driver::props;
  for (const auto& r : {P::subst_identity(11, 100), P::subst_composition(11, 100), P::subst_lemma(11, 100),
                        P::match_roundtrip(11, 100), P::preservation(11, 30), P::differential(11, 30, 100000)}) {
    INFO(P::summary(r));
    for (const auto& e : r.examples) INFO(e);
    CHECK(r.ok());
    CHECK(r.cases > 0);
  }
}

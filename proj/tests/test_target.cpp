#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "sfbox/diagnostic.hpp"
#include "sfbox/target/check.hpp"
#include "sfbox/target/embedding.hpp"
#include "sfbox/target/equality.hpp"
#include "sfbox/target/eval.hpp"
#include "sfbox/target/examples.hpp"

using namespace sfbox;
using namespace sfbox::target;

namespace {

Code code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Code::InternalInvariantViolation;
}

Signature tm_sig() {
  Signature s = embedding_signature();
  s.types.push_back({"tm", 0});
  auto tm = t_base(tdata("tm"));
  s.cons.push_back({"app", {}, nullptr, "con", {t_arr(tm, t_arr(tm, tm)), tdata("tm")}});
  s.cons.push_back({"lam", {}, nullptr, "con", {t_arr(t_arr(tm, tm), tm), tdata("tm")}});
  return s;
}

TypePtr ctx_of(int n) {
  TypePtr c = t_nil();
  for (int i = 0; i < n; ++i) c = t_cons(c, tdata("tm"));
  return c;
}

bool value_checks(const Signature& sig, const ValuePtr& v, const TypePtr& t) {
  try {
    check_expr(sig, {}, builtin_bindings(), reify(sig, v, t), t);
    return true;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

TEST_CASE("polymorphic identity checks and runs") {
  Signature sig;
  sig.types = {{"unit", 0}};
  sig.cons = {{"U", {}, nullptr, "unit", {}}};
  auto id = tylam("a", lam("x", nullptr, var("x")));
  auto ty = tforall("a", tarrow(tvar("a"), tvar("a")));
  CHECK(check_expr(sig, {}, nullptr, id, ty).empty());
  CHECK(code_of([&] { check_expr(sig, {}, nullptr, id, tarrow(tdata("unit"), tdata("unit"))); }) ==
        Code::TypeMismatch);
  Fuel fuel(100);
  auto r = eval(nullptr, app(tyapp(id, tdata("unit")), con("U")), fuel);
  CHECK(show(r) == "U");
}

TEST_CASE("fix unfolds to its body") {
  Signature sig;
  sig.types = {{"unit", 0}};
  sig.cons = {{"U", {}, nullptr, "unit", {}}};
  auto e = fix("f", tdata("unit"), con("U"));
  CHECK(check_expr(sig, {}, nullptr, e, tdata("unit")).empty());
  Fuel fuel(10);
  CHECK(show(eval(nullptr, e, fuel)) == "U");
}

TEST_CASE("unbound type variables and arity are reported") {
  Signature sig;
  sig.types = {{"unit", 0}, {"box", 1}};
  sig.cons = {{"U", {}, nullptr, "unit", {}}, {"B", {"a"}, tvar("a"), "box", {tvar("a")}}};
  CHECK(code_of([&] { check_expr(sig, {}, nullptr, con("U"), tvar("q")); }) == Code::UnboundTypeVar);
  CHECK(code_of([&] { check_expr(sig, {}, nullptr, con("B", {}, con("U")), tdata("box", {tdata("unit")})); }) ==
        Code::ArityError);
  CHECK(code_of([&] { check_expr(sig, {}, nullptr, con("U"), tdata("box")); }) == Code::ArityError);
}

TEST_CASE("zip checks, flags the impossible branches, and evaluates") {
  Program p = zip_program();
  auto warnings = check_program(p);
  REQUIRE(warnings.size() == 2);
  for (auto& w : warnings) CHECK(w.code == Code::UnsatisfiableBranchReached);
  Fuel fuel(10000);
  auto r = run_main(p, fuel);
  using oracle::v;
  using oracle::vp;
  auto uu = vp(v("U"), v("U"));
  CHECK(value_equal(r, v("Cons", vp(uu, v("Cons", vp(uu, v("Nil")))))));
  CHECK(value_checks(p.sig, r, p.defs.back().type));
}

TEST_CASE("zip without the length equality is rejected") {
  Program p = zip_program();
  auto& d = p.defs[0];
  // Claim the two vectors may differ in length: the recursive call no longer checks.
  auto a2 = tvar("a2");
  d.type = tforall({"a", "a2", "b1", "b2"},
                   tarrow(tprod(tdata("vec", {tvar("a"), tvar("b1")}), tdata("vec", {a2, tvar("b2")})),
                          tdata("vec", {tvar("a"), tprod(tvar("b1"), tvar("b2"))})));
  CHECK_THROWS_AS(check_program(p), Error);
}

TEST_CASE("entailment examples") {
  auto a = tvar("a"), a1 = tvar("a1"), a2 = tvar("a2");
  auto s = [](TypePtr t) { return tdata("s", {t}); };
  Constraints empty;
  CHECK(empty.entails(s(a), s(a)));
  Constraints zip;
  zip.assume(a, s(a1));
  zip.assume(a, s(a2));
  CHECK(zip.entails(a1, a2));
  CHECK(!zip.contradictory());
  Constraints one;
  one.assume(a, s(a1));
  CHECK(!one.entails(a1, a));
  CHECK(!oracle::naive_entails({{a, s(a1)}}, a1, a));
  CHECK(oracle::naive_entails({{a, s(a1)}, {a, s(a2)}}, a1, a2));
  Constraints clash;
  clash.assume(tdata("z"), s(a));
  CHECK(clash.contradictory());
  Constraints cyc;
  cyc.assume(a, s(a));
  CHECK(cyc.contradictory());
}

TEST_CASE("entailment under quantifiers compares bodies") {
  Constraints d;
  d.assume(tvar("x"), tvar("y"));
  auto l = tforall("a", tarrow(tvar("a"), tvar("x")));
  auto r = tforall("b", tarrow(tvar("b"), tvar("y")));
  CHECK(d.entails(l, r));
  CHECK(!d.entails(l, tforall("b", tarrow(tvar("x"), tvar("b")))));
}

TEST_CASE("entailment agrees with saturation on random constraint sets") {
  std::mt19937_64 rng(7);
  auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); };
  std::function<TypePtr(int)> gen = [&](int depth) -> TypePtr {
    int c = pick(depth > 0 ? 6 : 3);
    switch (c) {
      case 0: return tvar("a");
      case 1: return tvar("b");
      case 2: return pick(2) ? tvar("c") : tdata("z");
      case 3: return tdata("s", {gen(depth - 1)});
      case 4: return tarrow(gen(depth - 1), gen(depth - 1));
      default: return tprod(gen(depth - 1), gen(depth - 1));
    }
  };
  for (int i = 0; i < 150; ++i) {
    std::vector<std::pair<TypePtr, TypePtr>> eqs;
    Constraints d;
    for (int k = pick(3) + 1; k > 0; --k) {
      eqs.emplace_back(gen(2), gen(2));
      d.assume(eqs.back().first, eqs.back().second);
    }
    auto x = gen(2), y = gen(2), w = gen(1);
    bool got = d.entails(x, y);
    CHECK(got == oracle::naive_entails(eqs, x, y));
    CHECK(d.entails(x, x));
    CHECK(got == d.entails(y, x));
    if (got && d.entails(y, w)) CHECK(d.entails(x, w));
    if (got) {
      CHECK(d.entails(tdata("s", {x}), tdata("s", {y})));
      CHECK(d.entails(tarrow(x, w), tarrow(y, w)));
      CHECK(d.entails(tprod(w, x), tprod(w, y)));
    }
  }
}

TEST_CASE("pattern typing records equalities") {
  Program zp = zip_program();
  auto tl = tvar("tl"), te = tvar("te");
  Constraints d;
  d.add_var("tl");
  d.add_var("te");
  auto r = check_pattern(zp.sig, d, pcon("Nil", {"b"}), tdata("vec", {tl, te}));
  REQUIRE(r.vars == std::vector<std::string>{"b"});
  REQUIRE(r.equalities.size() == 2);
  CHECK(type_equal(r.equalities[0].first, tdata("z")));
  CHECK(type_equal(r.equalities[0].second, tl));
  CHECK(type_equal(r.equalities[1].first, tvar("b")));
  CHECK(type_equal(r.equalities[1].second, te));

  auto x = check_pattern(zp.sig, d, pvar("x"), tl);
  CHECK(x.vars.empty());
  CHECK(x.bindings.size() == 1);

  auto pr = check_pattern(zp.sig, d, ppair(pvar("x"), pvar("y")), tprod(tl, te));
  CHECK(pr.bindings.size() == 2);

  CHECK(code_of([&] { check_pattern(zp.sig, d, ppair(pvar("x"), pvar("x")), tprod(tl, te)); }) == Code::NonLinear);
  CHECK(code_of([&] { check_pattern(zp.sig, d, pcon("Nil", {}), tdata("vec", {tl, te})); }) == Code::ArityError);
  CHECK(code_of([&] {
          check_pattern(zp.sig, d, pcon("Cons", {"a", "a"}, pvar("p")), tdata("vec", {tl, te}));
        }) == Code::NonLinear);
}

TEST_CASE("apply_sub examples") {
  using oracle::v;
  using oracle::vp;
  auto top = v("Var", v("Top"));
  auto m = oracle::embed(oracle::db_app(oracle::db_var(0), oracle::db_var(0)));
  CHECK(value_equal(apply_sub_db(top, v("Dot", vp(oracle::embed_shift(0), m))), m));
  CHECK(value_equal(apply_sub_db(top, oracle::embed_shift(1)), v("Var", v("Pop", v("Top")))));
  auto bx = v("Box", m);
  CHECK(value_equal(apply_sub_db(bx, oracle::embed_shift(2)), bx));
  CHECK(code_of([&] { apply_sub_db(v("Top"), oracle::embed_shift(0)); }) == Code::IndexMismatch);
}

TEST_CASE("apply_sub agrees with the de Bruijn oracle and preserves indices") {
  Signature sig = tm_sig();
  check_signature(sig);
  auto tm = t_base(tdata("tm"));
  int cases = 0;
  for (int n = 0; n <= 2; ++n)
    for (auto& t : oracle::db_terms(n, 2)) {
      auto mv = oracle::embed(t);
      REQUIRE(value_checks(sig, mv, t_sftm(ctx_of(n), tm)));
      for (int m = 0; m <= 2; ++m)
        for (int e = 0; e <= n; ++e) {
          int shift = m - n + e;
          if (shift < 0) continue;
          auto vars = oracle::db_terms(m, 1);
          if (vars.empty() && e > 0) continue;
          std::vector<std::size_t> choice(static_cast<std::size_t>(e), 0);
          for (;;) {
            oracle::DBSub s{shift, {}};
            for (auto c : choice) s.entries.push_back(vars[c]);
            auto sv = oracle::embed(s);
            REQUIRE(value_checks(sig, sv, t_sub(ctx_of(m), ctx_of(n))));
            auto r = apply_sub_db(mv, sv);
            CHECK(value_checks(sig, r, t_sftm(ctx_of(m), tm)));
            CHECK(value_equal(r, oracle::embed(oracle::db_apply(t, oracle::as_function(s)))));
            ++cases;
            std::size_t i = 0;
            while (i < choice.size() && ++choice[i] == vars.size()) choice[i++] = 0;
            if (i == choice.size()) break;
          }
        }
    }
  CHECK(cases > 100);
}

TEST_CASE("apply_sub through the builtin") {
  Signature sig = tm_sig();
  auto tm = t_base(tdata("tm"));
  auto g1 = ctx_of(1);
  auto nil = t_nil(), a = tdata("tm");
  auto ident = con("Lam", {nil, a, tm}, con("Var", {t_cons(nil, a), a}, con("Top", {nil, a})));
  auto lam_id = con("C", {nil, t_arr(t_arr(tm, tm), tm), a},
                    pair(con("lam"), con("Cons", {nil, t_arr(tm, tm), tm, tm}, pair(ident, con("Empty", {nil, tm})))));
  auto closed = con("Box", {g1, tm}, lam_id);
  auto closed0 = con("Box", {nil, tm}, lam_id);
  auto e = app(app(tyapp(tyapp(tyapp(var(kApplySub), g1), nil), t_boxed(tm)), closed0),
               con("Shift", {g1, nil}, con("Suc", {nil, nil, a}, con("Id", {nil}))));
  CHECK(code_of([&] { check_expr(sig, {}, builtin_bindings(), closed, t_sftm(nil, t_boxed(tm))); }) ==
        Code::TypeMismatch);
  CHECK(check_expr(sig, {}, builtin_bindings(), e, t_sftm(g1, t_boxed(tm))).empty());
  Fuel fuel(100);
  Program p;
  p.sig = sig;
  p.defs = {{"r", t_sftm(g1, t_boxed(tm)), e}};
  p.main = "r";
  CHECK(check_program(p).empty());
  auto out = run_main(p, fuel);
  CHECK(show(out) == "Box(C((lam, Cons((Lam(Var(Top)), Empty)))))");
}

TEST_CASE("carrying types does not change results") {
  Program p = zip_program();
  Fuel f1(10000), f2(10000);
  auto a = run_main(p, f1, {false});
  auto b = run_main(p, f2, {true});
  CHECK(value_equal(a, b));
  CHECK(!b->types.empty());
  CHECK(a->types.empty());
}

TEST_CASE("evaluation faults") {
  Program p = zip_program();
  Fuel fuel(3);
  CHECK(code_of([&] { run_main(p, fuel); }) == Code::FuelExhausted);
  Fuel more(100);
  auto bad = match(con("U"), {{pcon("Nil", {"b"}), con("U")}});
  CHECK(code_of([&] { eval(nullptr, bad, more); }) == Code::MatchFailure);
}

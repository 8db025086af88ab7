#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "sfbox/diagnostic.hpp"
#include "sfbox/driver/gen.hpp"
#include "sfbox/sf/alpha.hpp"
#include "sfbox/sf/match.hpp"
#include "sfbox/sf/print.hpp"
#include "sfbox/sf/subst.hpp"
#include "sfbox/sf/typing.hpp"

using namespace sfbox;
using namespace sfbox::sf;

namespace {

Signature tm_sig() {
  Signature s;
  s.atoms = {"tm"};
  auto tm = atom("tm");
  s.constructors = {{"cst", tm},
                    {"app", arrow(tm, arrow(tm, tm))},
                    {"lam", arrow(arrow(tm, tm), tm)},
                    {"pair", arrow(tm, arrow(tm, tm))},
                    {"bx", arrow(boxed(tm), tm)}};
  return s;
}

Ctx ctx_of(std::initializer_list<const char*> names, std::optional<std::string> var = std::nullopt) {
  Ctx c;
  c.var = var;
  for (const char* n : names) c.entries.push_back({n, "tm"});
  return c;
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

AmbientEntry amb_entry(Ctx c, bool param = false) { return AmbientEntry{ContextualType{std::move(c), "tm"}, param}; }

}  // namespace

TEST_CASE("wf_signature") {
  CHECK_NOTHROW(wf_signature(tm_sig()));
  CHECK_NOTHROW(wf_signature(Signature{}));
  Signature bad;
  bad.constructors = {{"c", arrow(atom("tm"), atom("tm"))}};
  CHECK(code_of([&] { wf_signature(bad); }) == Code::UndeclaredAtom);
  Signature dup = tm_sig();
  dup.atoms.push_back("cst");
  CHECK(code_of([&] { wf_signature(dup); }) == Code::DuplicateName);
  Signature nonatomic = tm_sig();
  nonatomic.constructors.push_back({"f", arrow(atom("tm"), boxed(atom("tm")))});
  CHECK(code_of([&] { wf_signature(nonatomic); }) == Code::NonAtomicTarget);
}

TEST_CASE("check_sf_term examples") {
  auto sig = tm_sig();
  auto tm = atom("tm");
  auto m = const_app("lam", {lam("x", const_app("app", {bvar("x"), bvar("x")}))});
  CHECK_NOTHROW(check_sf_term(sig, empty_ambient(), Ctx{}, m, tm));

  Ambient amb = [](const std::string& n) -> std::optional<AmbientEntry> {
    if (n == "u") return amb_entry(ctx_of({"x"}));
    return std::nullopt;
  };
  CHECK_NOTHROW(check_sf_term(sig, amb, ctx_of({"x"}), qvar("u"), tm));
  CHECK(code_of([&] { check_sf_term(sig, amb, ctx_of({"x", "y"}), qvar("u"), tm); }) == Code::ContextMismatch);

  CHECK(code_of([&] { check_sf_term(sig, amb, Ctx{}, bvar("z"), tm); }) == Code::UnboundVar);
  CHECK(code_of([&] { check_sf_term(sig, amb, Ctx{}, const_app("app", {const_app("cst")}), tm); }) ==
        Code::SpineArity);
  // box bodies are checked in the empty context
  auto open_box = const_app("bx", {box(bvar("x"))});
  CHECK(code_of([&] { check_sf_term(sig, amb, ctx_of({"x"}), open_box, tm); }) == Code::NotClosed);
  auto open_q = const_app("bx", {box(qvar("u"))});
  CHECK(code_of([&] { check_sf_term(sig, amb, ctx_of({"x"}), open_q, tm); }) == Code::NotClosed);
  auto closed_box = const_app("bx", {box(lam("y", bvar("y")))});
  CHECK(code_of([&] { check_sf_term(sig, amb, Ctx{}, closed_box, tm); }) == Code::TypeMismatch);
}

TEST_CASE("parameter variables and weakening") {
  auto sig = tm_sig();
  auto tm = atom("tm");
  Ambient amb = [](const std::string& n) -> std::optional<AmbientEntry> {
    if (n == "v") return amb_entry(ctx_of({}, "g"), true);
    if (n == "u") return amb_entry(ctx_of({}, "g"), false);
    return std::nullopt;
  };
  CHECK_NOTHROW(check_sf_term(sig, amb, ctx_of({}, "g"), pvar("v"), tm));
  CHECK_NOTHROW(check_sf_term(sig, amb, ctx_of({"x"}, "g"), pvar("v", 2), tm));
  CHECK(code_of([&] { check_sf_term(sig, amb, ctx_of({"x"}, "g"), pvar("v", 1), tm); }) == Code::ContextMismatch);
  CHECK(code_of([&] { check_sf_term(sig, amb, ctx_of({}, "g"), pvar("u"), tm); }) == Code::TypeMismatch);
}

TEST_CASE("check_sf_subst examples") {
  auto sig = tm_sig();
  auto amb = empty_ambient();
  Ctx psi = ctx_of({"x", "y"}, "g");
  Subst swap{2, {bvar("y"), bvar("x")}, false};
  CHECK_NOTHROW(check_sf_subst(sig, amb, psi, swap, psi));

  Ctx concrete = ctx_of({"a", "b", "c"});
  Subst all{3, {}, false};
  CHECK_NOTHROW(check_sf_subst(sig, amb, concrete, all, Ctx{}));

  Subst dot{0, {}, false};
  CHECK(code_of([&] { check_sf_subst(sig, amb, Ctx{}, dot, ctx_of({"x"})); }) == Code::LengthMismatch);

  Subst elided{0, {const_app("cst")}, true};
  auto s = check_sf_subst(sig, amb, ctx_of({"z"}, "g"), elided, ctx_of({"x"}, "g"));
  CHECK(s.shift == 1);
  CHECK(code_of([&] { check_sf_subst(sig, amb, ctx_of({"z"}), elided, ctx_of({"x"}, "g")); }) == Code::BadShift);
  Subst too_far{4, {}, false};
  CHECK(code_of([&] { check_sf_subst(sig, amb, concrete, too_far, Ctx{}); }) == Code::BadShift);
  Subst bad_entry{0, {lam("q", bvar("q"))}, true};
  CHECK(code_of([&] { check_sf_subst(sig, amb, Ctx{}, bad_entry, ctx_of({"x"})); }) == Code::EntryTypeMismatch);
}

TEST_CASE("apply_subst examples against the naive oracle") {
  ErasedCtx gxy{"x", "y"};
  Subst swap{2, {bvar("y"), bvar("x")}, false};
  auto m = const_app("app", {bvar("x"), bvar("y")});
  auto got = apply_subst(swap, gxy, gxy, m);
  auto oracle = oracle::naive_subst({{"x", bvar("y")}, {"y", bvar("x")}}, {"x", "y"}, m);
  CHECK(alpha_eq(got, oracle));
  CHECK(show(got) == "app y x");

  CHECK(alpha_eq(apply_subst(identity_subst(), ErasedCtx{"x"}, ErasedCtx{"x"}, bvar("x")), bvar("x")));

  auto b = box(lam("z", bvar("z")));
  CHECK(apply_subst(swap, gxy, gxy, b) == b);

  // binder capture: [y/x](\y. app x y) must rename the binder
  auto under = lam("y", const_app("app", {bvar("x"), bvar("y")}));
  Subst s{1, {bvar("y")}, false};
  auto r = apply_subst(s, ErasedCtx{"y", "x"}, ErasedCtx{"y"}, under);
  CHECK(alpha_eq(r, oracle::naive_subst({{"x", bvar("y")}}, {"y"}, under)));
  CHECK(!alpha_eq(r, lam("y", const_app("app", {bvar("y"), bvar("y")}))));
}

TEST_CASE("lookup_var") {
  auto M = const_app("cst");
  auto N = const_app("pair", {const_app("cst"), const_app("cst")});
  CHECK(lookup_var("x", Subst{0, {M}, false}, {"x"}, {}) == M);
  CHECK(lookup_var("x", Subst{0, {M, N}, false}, {"x", "y"}, {}) == M);
  CHECK(code_of([&] { lookup_var("x", Subst{}, {}, {}); }) == Code::LookupFailure);
}

TEST_CASE("compose_subst laws on examples") {
  // sigma o . = sigma
  Subst sigma{1, {const_app("cst")}, false};
  auto c = compose_subst(sigma, {"a", "b"}, {"a"}, identity_subst());
  CHECK(c.shift == sigma.shift);
  CHECK(c.entries.size() == 1);
  // ^1 o (cst/x) over the empty domain prefix
  auto d = compose_subst(Subst{1, {}, false}, {}, {"y"}, Subst{0, {const_app("cst")}, false});
  CHECK(d.shift == 1);
  REQUIRE(d.entries.size() == 1);
  CHECK(show(d.entries[0]) == "cst");
}

TEST_CASE("check_sf_pattern examples") {
  auto sig = tm_sig();
  auto tm = atom("tm");
  auto g = check_sf_pattern(sig, Ctx{}, pconst("app", {pqvar("m"), pqvar("n")}), tm);
  REQUIRE(g.size() == 2);
  CHECK(g[0].name == "m");
  CHECK(g[0].type.ctx.closed());
  auto h = check_sf_pattern(sig, ctx_of({"x"}, "g"), ppvar("v", 2), tm);
  REQUIRE(h.size() == 1);
  CHECK(h[0].param);
  CHECK(same_shape(h[0].type.ctx, ctx_of({}, "g")));
  CHECK(code_of([&] { check_sf_pattern(sig, Ctx{}, pconst("app", {pqvar("m"), pqvar("m")}), tm); }) ==
        Code::NonLinear);
  CHECK(code_of([&] { check_sf_pattern(sig, ctx_of({"x"}), ppvar("v", 3), tm); }) == Code::WeakeningTooDeep);
  auto under = check_sf_pattern(sig, Ctx{}, pconst("lam", {plam("x", pqvar("m"))}), tm);
  CHECK(under[0].type.ctx.size() == 1);
}

TEST_CASE("match_sf examples") {
  auto r = pconst("app", {pqvar("m"), pqvar("n")});
  auto m = const_app("app", {const_app("cst"), const_app("lam", {lam("x", bvar("x"))})});
  auto rho = match_sf({}, {}, r, m);
  REQUIRE(rho);
  REQUIRE(rho->size() == 2);
  CHECK(show((*rho)[0].value) == "[cst]");
  CHECK(show((*rho)[1].value) == "[lam (\\x. x)]");
  CHECK(alpha_eq(instantiate(r, {}, {}, *rho), m));

  CHECK(match_sf({"x"}, {"x"}, pbvar("x"), bvar("x"))->empty());

  // #y and ##y against variables of (g..., z, x)
  ErasedCtx ctx{"z", "x"};
  std::vector<std::string> pnames{"", "x"};
  CHECK(match_sf(ctx, pnames, ppvar("y", 1), bvar("x")));
  CHECK(!match_sf(ctx, pnames, ppvar("y", 2), bvar("x")));
  auto hit = match_sf(ctx, pnames, ppvar("y", 2), bvar("z"));
  REQUIRE(hit);
  CHECK((*hit)[0].value.ectx == ErasedCtx{"z"});
  CHECK(alpha_eq(instantiate(ppvar("y", 2), ctx, pnames, *hit), bvar("z")));
}

TEST_CASE("alpha_eq") {
  CHECK(alpha_eq(const_app("lam", {lam("x", bvar("x"))}), const_app("lam", {lam("y", bvar("y"))})));
  CHECK(!alpha_eq(const_app("lam", {lam("x", const_app("app", {bvar("x"), bvar("x")}))}),
                  const_app("lam", {lam("y", const_app("app", {bvar("y"), bvar("z")}))})));
  CHECK(alpha_eq(ContextualObject{{"a"}, bvar("a")}, ContextualObject{{"b"}, bvar("b")}));
}

TEST_CASE("apply_subst agrees with naive substitution on generated ground terms") {
  int compared = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    std::mt19937_64 rng(seed);
    auto sig = seed % 2 ? driver::gen::cloconv_signature() : driver::gen::tm_signature();
    driver::gen::SfGen g(sig, rng);
    driver::gen::Names names;
    auto psi = g.context(3, names);
    auto [sigma, phi] = g.subst_into(psi, 2, names);
    auto a = g.atom();
    auto m = g.term(phi, a, 4);

    std::map<std::string, TermPtr> map;
    std::set<std::string> range;
    for (const auto& e : psi.entries) range.insert(e.name);
    const std::size_t prefix = phi.size() - sigma.entries.size();
    for (std::size_t i = 0; i < phi.size(); ++i)
      map[phi.entries[i].name] = i < prefix ? bvar(psi.entries[i].name) : sigma.entries[i - prefix];

    auto got = apply_subst(sigma, phi, psi, m);
    auto want = oracle::naive_subst(map, range, m);
    INFO(show(m), " under ", show(sigma));
    CHECK(alpha_eq(got, want));
    CHECK_NOTHROW(check_sf_term(sig, empty_ambient(), psi, got, atom(a)));
    ++compared;
  }
  CHECK(compared == 1000);
}

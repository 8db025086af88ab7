#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>

#include "oracles.hpp"
#include "sfbox/coreml/check.hpp"
#include "sfbox/coreml/eval.hpp"
#include "sfbox/driver/parse.hpp"
#include "sfbox/driver/props.hpp"
#include "sfbox/driver/stack.hpp"
#include "sfbox/sf/alpha.hpp"
#include "sfbox/sf/print.hpp"
#include "sfbox/target/check.hpp"
#include "sfbox/target/embedding.hpp"
#include "sfbox/target/equality.hpp"
#include "sfbox/target/eval.hpp"
#include "sfbox/target/examples.hpp"

using namespace sfbox;
namespace P = sfbox::driver::props;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
  bool ok = true;
  std::string detail;
};

std::string corpus_dir() { return SFBOX_CORPUS_DIR; }

std::vector<std::string> corpus_texts() {
  std::vector<std::string> out;
  for (const char* f : {"rewrite.sfb", "path.sfb", "cloconv.sfb"})
    out.push_back(driver::read_file(corpus_dir() + "/" + f));
  return out;
}

bool report(int n, const std::string& name, double limit, const std::function<Outcome()>& body) {
  auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = driver::with_big_stack(body);
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  bool ok = o.ok && secs < limit;
  std::printf("%s %d %s: %s (%.2fs, limit %.0fs)\n", ok ? "PASS" : "FAIL", n, name.c_str(), o.detail.c_str(), secs,
              limit);
  std::fflush(stdout);
  return ok;
}

Outcome props(const std::vector<P::Result>& rs) {
  Outcome o;
  std::string sep;
  for (const auto& r : rs) {
    o.ok = o.ok && r.ok() && r.cases > 0;
    o.detail += sep + P::summary(r);
    sep = "; ";
    for (const auto& e : r.examples) std::cout << "  " << r.name << ": " << e << "\n";
  }
  return o;
}

Outcome corpus_fidelity() {
  Outcome o;
  for (const char* f : {"rewrite.sfb", "path.sfb", "cloconv.sfb"}) {
    try {
      ml::check_program(driver::parse_program(driver::read_file(corpus_dir() + "/" + f)));
    } catch (const Error& e) {
      o.ok = false;
      std::cout << "  " << f << ": " << e.diag().str() << "\n";
    }
  }
  std::size_t mutants = 0, rejected = 0;
  for (auto& e : fs::directory_iterator(corpus_dir() + "/mutants")) {
    auto text = driver::read_file(e.path().string());
    auto first = text.substr(0, text.find('\n'));
    auto expected = first.rfind("-- expect: ", 0) == 0 ? first.substr(11) : "?";
    std::string got = "accepted";
    try {
      ml::check_program(driver::parse_program(text));
    } catch (const Error& err) {
      got = std::string(code_name(err.code()));
    }
    ++mutants;
    if (got == expected)
      ++rejected;
    else
      std::cout << "  " << e.path().filename().string() << ": expected " << expected << ", got " << got << "\n";
  }
  o.ok = o.ok && mutants >= 20 && rejected == mutants;
  o.detail = "3 corpus files, " + std::to_string(rejected) + "/" + std::to_string(mutants) +
             " mutants rejected with their designated code";
  return o;
}

Outcome differential() {
  auto corpus = P::differential(corpus_texts(), 100000);
  auto gen = P::differential(kSeed, 500, 100000);
  auto o = props({corpus, gen});
  double rate = gen.cases ? double(gen.fuel_exhausted) / double(gen.cases) : 1.0;
  o.ok = o.ok && corpus.fuel_exhausted == 0 && rate < 0.10;
  std::ostringstream s;
  s << "; fuel-exhausted rate " << rate * 100 << "%";
  o.detail += s.str();
  return o;
}

target::TypePtr ctx_of(int n) {
  auto c = target::t_nil();
  for (int i = 0; i < n; ++i) c = target::t_cons(c, target::tdata("tm"));
  return c;
}

bool value_checks(const target::Signature& sig, const target::ValuePtr& v, const target::TypePtr& t) {
  try {
    target::check_expr(sig, {}, target::builtin_bindings(), target::reify(sig, v, t), t);
    return true;
  } catch (const Error&) {
    return false;
  }
}

// Every embedded term of depth <= 3 over app/lam in contexts of length <= 2, under every
// substitution whose entries are variables of the range.
Outcome index_preservation() {
  using namespace target;
  Signature sig = embedding_signature();
  sig.types.push_back({"tm", 0});
  auto tm = t_base(tdata("tm"));
  sig.cons.push_back({"app", {}, nullptr, "con", {t_arr(tm, t_arr(tm, tm)), tdata("tm")}});
  sig.cons.push_back({"lam", {}, nullptr, "con", {t_arr(t_arr(tm, tm), tm), tdata("tm")}});
  check_signature(sig);

  std::size_t cases = 0, bad = 0;
  for (int n = 0; n <= 2; ++n)
    for (auto& t : oracle::db_terms(n, 3)) {
      auto mv = oracle::embed(t);
      if (!value_checks(sig, mv, t_sftm(ctx_of(n), tm))) {
        ++bad;
        continue;
      }
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
            auto r = apply_sub_db(mv, oracle::embed(s));
            auto want = oracle::embed(oracle::db_apply(t, oracle::as_function(s)));
            if (!value_checks(sig, r, t_sftm(ctx_of(m), tm)) || !value_equal(r, want)) ++bad;
            ++cases;
            std::size_t i = 0;
            while (i < choice.size() && ++choice[i] == vars.size()) choice[i++] = 0;
            if (i == choice.size()) break;
          }
        }
    }
  return {bad == 0 && cases > 1000,
          std::to_string(cases) + " (term, substitution) pairs, " + std::to_string(bad) + " mismatches"};
}

Outcome entailment() {
  using namespace target;
  auto p = zip_program();
  auto warnings = check_program(p);
  bool flagged = warnings.size() == 2;
  for (const auto& w : warnings)
    flagged = flagged && w.code == Code::UnsatisfiableBranchReached &&
              w.message.find("Nil") != std::string::npos && w.message.find("Cons") != std::string::npos;

  auto a = tvar("a"), a1 = tvar("a1"), a2 = tvar("a2");
  auto s = [](TypePtr t) { return tdata("s", {t}); };
  Constraints cons;
  cons.assume(a, s(a1));
  cons.assume(a, s(a2));
  bool entails = cons.entails(a1, a2) && !cons.contradictory() &&
                 oracle::naive_entails({{a, s(a1)}, {a, s(a2)}}, a1, a2);
  Constraints mixed;
  mixed.assume(a, tdata("z"));
  mixed.assume(a, s(a2));

  // without the shared length the Cons/Cons branch has nothing to entail from
  auto loose = zip_program();
  loose.defs[0].type = tforall({"a", "a2", "b1", "b2"},
                               tarrow(tprod(tdata("vec", {tvar("a"), tvar("b1")}), tdata("vec", {a2, tvar("b2")})),
                                      tdata("vec", {tvar("a"), tprod(tvar("b1"), tvar("b2"))})));
  bool needed = false;
  try {
    check_program(loose);
  } catch (const Error&) {
    needed = true;
  }

  Fuel fuel(10000);
  auto r = run_main(p, fuel);
  auto uu = oracle::vp(oracle::v("U"), oracle::v("U"));
  bool runs = value_equal(r, oracle::v("Cons", oracle::vp(uu, oracle::v("Cons", oracle::vp(uu, oracle::v("Nil"))))));

  bool ok = flagged && entails && mixed.contradictory() && needed && runs;
  return {ok, std::string("Cons/Cons entails a1 = a2: ") + (entails ? "yes" : "no") + ", Nil/Cons flagged: " +
                  (flagged ? "yes" : "no") + ", rejected without the equality: " + (needed ? "yes" : "no") +
                  ", zip runs: " + (runs ? "yes" : "no")};
}

Outcome golds() {
  auto base = driver::read_file(corpus_dir() + "/rewrite.sfb");
  base = base.substr(0, base.find("def sugar"));
  auto run = [&](const std::string& input) {
    auto c = ml::check_program(driver::parse_program(base + "def e : [tm] = rewrite [" + input + "]\nmain e\n"));
    ml::Fuel fuel(100000);
    return ml::run_main(c.program, fuel)->obj.term;
  };
  auto sig = driver::parse_program(base).sf;
  auto letv = run("letv cst (\\x. pair x x)");
  auto letpair = run("letpair (pair cst cst) (\\f. \\s. app f s)");
  bool a = sf::alpha_eq(letv, driver::parse_sf_term(sig, "pair cst cst"));
  bool b = sf::alpha_eq(letpair, driver::parse_sf_term(sig, "app (fst (pair cst cst)) (snd (pair cst cst))"));
  return {a && b, "letv gives " + sf::show(letv) + ", letpair gives " + sf::show(letpair)};
}

}  // namespace

int main() {
  bool ok = true;
  ok &= report(1, "corpus fidelity", 5, corpus_fidelity);
  ok &= report(2, "translation preservation", 60, [] { return props({P::preservation(kSeed, 1000)}); });
  ok &= report(3, "substitution laws", 30, [] {
    return props({P::subst_identity(kSeed, 1000), P::subst_composition(kSeed, 1000), P::subst_lemma(kSeed, 1000)});
  });
  ok &= report(4, "matching soundness and determinism", 30, [] { return props({P::match_roundtrip(kSeed, 1000)}); });
  ok &= report(5, "differential semantics", 120, differential);
  ok &= report(6, "embedded index preservation", 60, index_preservation);
  ok &= report(7, "constraint entailment", 1, entailment);
  ok &= report(8, "evaluation golds", 5, golds);
  return ok ? 0 : 1;
}

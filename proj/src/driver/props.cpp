#include "sfbox/driver/props.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>

#include "sfbox/coreml/check.hpp"
#include "sfbox/coreml/eval.hpp"
#include "sfbox/driver/gen.hpp"
#include "sfbox/driver/parse.hpp"
#include "sfbox/driver/stack.hpp"
#include "sfbox/fuel.hpp"
#include "sfbox/sf/alpha.hpp"
#include "sfbox/sf/match.hpp"
#include "sfbox/sf/print.hpp"
#include "sfbox/sf/subst.hpp"
#include "sfbox/sf/typing.hpp"
#include "sfbox/target/eval.hpp"
#include "sfbox/translate/translate.hpp"
#include "sfbox/translate/verify.hpp"

namespace sfbox::driver::props {

namespace {

constexpr std::size_t kExamples = 5;

struct Failed {
  std::string why;
};

// Runs body(i, rng) for each case. A thrown Failed or Error counts as a failure of that case.
Result run_cases(const std::string& name, std::uint64_t seed, std::size_t n,
                 const std::function<void(std::size_t, std::mt19937_64&)>& body) {
  Result r;
  r.name = name;
  auto t0 = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < n; ++i) {
    std::mt19937_64 rng(seed + i);
    std::string why;
    try {
      body(i, rng);
    } catch (const Failed& f) {
      why = f.why;
    } catch (const Error& e) {
      why = e.diag().str();
    }
    ++r.cases;
    if (!why.empty()) {
      ++r.failures;
      if (r.examples.size() < kExamples) r.examples.push_back("seed " + std::to_string(seed + i) + ": " + why);
    }
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

void expect(bool ok, const std::string& why) {
  if (!ok) throw Failed{why};
}

// One SF setting: a signature, a context psi that may start with g, and quoted variables
// over g in scope.
struct Setting {
  gen::SfGen gen;
  gen::Names names;
  sf::Ctx psi;
  std::vector<gen::Hole> holes;
  sf::Ambient amb;

  Setting(std::size_t i, std::mt19937_64& rng, bool allow_var)
      : gen(i % 2 ? gen::cloconv_signature() : gen::tm_signature(), rng) {
    psi = gen.context(3, names);
    if (allow_var && rng() % 2) {
      psi.var = "g";
      std::size_t k = rng() % 3;
      for (std::size_t j = 0; j < k; ++j) {
        sf::Ctx c{"g", {}};
        if (rng() % 2) c.entries.push_back({names.fresh("h"), gen.atom()});
        holes.push_back({names.fresh("u"), {c, gen.atom()}, false});
      }
    }
    amb = [hs = holes](const std::string& u) -> std::optional<sf::AmbientEntry> {
      for (const auto& h : hs)
        if (h.name == u) return sf::AmbientEntry{h.type, h.param};
      return std::nullopt;
    };
  }

  const sf::Signature& sig() const { return gen.signature(); }

  // A term at atom a in c, elaborated by the checker.
  sf::TermPtr term(const sf::Ctx& c, const std::string& a, int depth) {
    auto raw = gen.term(c, a, depth, holes);
    return sf::check_sf_term(sig(), amb, c, raw, sf::atom(a));
  }
};

std::string describe(const sf::TermPtr& a, const sf::TermPtr& b) { return sf::show(a) + " vs " + sf::show(b); }

}  // namespace

Result subst_identity(std::uint64_t seed, std::size_t n) {
  return run_cases("substitution identity", seed, n, [](std::size_t i, std::mt19937_64& rng) {
    Setting s(i, rng, true);
    auto a = s.gen.atom();
    auto m = s.term(s.psi, a, 4);
    auto id = sf::check_sf_subst(s.sig(), s.amb, s.psi, sf::identity_subst(), s.psi);
    auto r = sf::apply_subst(id, s.psi, s.psi, m);
    auto want = sf::canonical(sf::erase(s.psi), m);
    expect(sf::alpha_eq(r, want), "[id] m differs from m: " + describe(r, want));
  });
}

Result subst_composition(std::uint64_t seed, std::size_t n) {
  return run_cases("substitution composition", seed, n, [](std::size_t i, std::mt19937_64& rng) {
    Setting s(i, rng, true);
    auto [sigma_raw, mid] = s.gen.subst_into(s.psi, 2, s.names, s.holes);
    auto sigma = sf::check_sf_subst(s.sig(), s.amb, s.psi, sigma_raw, mid);
    auto [tau_raw, dom] = s.gen.subst_into(mid, 2, s.names, s.holes);
    auto tau = sf::check_sf_subst(s.sig(), s.amb, mid, tau_raw, dom);
    auto a = s.gen.atom();
    auto m = s.term(dom, a, 3);
    auto both = sf::compose_subst(sigma, sf::erase(mid), sf::erase(s.psi), tau);
    try {
      sf::check_sf_subst(s.sig(), s.amb, s.psi, both, dom);
    } catch (const Error& e) {
      throw Failed{"sigma o tau = " + sf::show(both) + " is ill typed: " + e.diag().str()};
    }
    auto lhs = sf::apply_subst(sigma, mid, s.psi, sf::apply_subst(tau, dom, mid, m));
    auto rhs = sf::apply_subst(both, dom, s.psi, m);
    expect(sf::alpha_eq(lhs, rhs), "[sigma]([tau] m) differs from [sigma o tau] m: " + describe(lhs, rhs) +
                                       " where sigma = " + sf::show(sigma) + " : " + sf::show(mid) + " -> " +
                                       sf::show(s.psi) + ", tau = " + sf::show(tau) + " : " + sf::show(dom) +
                                       " -> " + sf::show(mid) + ", m = " + sf::show(m));
  });
}

Result subst_lemma(std::uint64_t seed, std::size_t n) {
  return run_cases("substitution lemma", seed, n, [](std::size_t i, std::mt19937_64& rng) {
    Setting s(i, rng, true);
    auto [sigma_raw, phi] = s.gen.subst_into(s.psi, 3, s.names, s.holes);
    auto sigma = sf::check_sf_subst(s.sig(), s.amb, s.psi, sigma_raw, phi);
    auto a = s.gen.atom();
    auto m = s.term(phi, a, 4);
    auto r = sf::apply_subst(sigma, phi, s.psi, m);
    try {
      sf::check_sf_term(s.sig(), s.amb, s.psi, r, sf::atom(a));
    } catch (const Error& e) {
      throw Failed{"[sigma] m = " + sf::show(r) + " is ill typed: " + e.diag().str()};
    }
  });
}

namespace {

// Distinct names for the runtime context: matching is positional.
sf::ErasedCtx runtime_names(std::size_t n) {
  sf::ErasedCtx out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("r" + std::to_string(i + 1));
  return out;
}

std::string show_bindings(const sf::Bindings& b) {
  std::string s;
  for (const auto& x : b) s += (s.empty() ? "" : ", ") + x.name + " = " + sf::show(x.value);
  return "{" + s + "}";
}

}  // namespace

Result match_roundtrip(std::uint64_t seed, std::size_t n) {
  return run_cases("pattern matching", seed, n, [](std::size_t i, std::mt19937_64& rng) {
    Setting s(i, rng, false);
    auto a = s.gen.atom();
    auto pnames = sf::erase(s.psi);
    auto vctx = runtime_names(pnames.size());
    auto [r, holes] = s.gen.pattern(s.psi, a, 3, s.names);

    auto checked = sf::check_sf_pattern(s.sig(), s.psi, r, sf::atom(a));
    expect(checked.size() == holes.size(), "pattern " + sf::show(r) + " binds a different number of variables");
    for (std::size_t k = 0; k < holes.size(); ++k)
      expect(checked[k].name == holes[k].name && checked[k].param == holes[k].param &&
                 checked[k].type.atom == holes[k].type.atom && sf::same_shape(checked[k].type.ctx, holes[k].type.ctx),
             "pattern " + sf::show(r) + " gives " + checked[k].name + " type " + sf::show(checked[k].type) +
                 ", expected " + sf::show(holes[k].type));

    // A value for every binding, over distinct names.
    sf::Bindings rho;
    for (const auto& h : holes) {
      sf::Ctx c = h.type.ctx;
      auto names = runtime_names(c.size());
      for (std::size_t k = 0; k < c.size(); ++k) c.entries[k].name = names[k];
      sf::TermPtr v;
      if (h.param) {
        std::vector<std::string> fit;
        for (const auto& e : c.entries)
          if (e.atom == h.type.atom) fit.push_back(e.name);
        if (fit.empty()) return;  // unreachable at this context: nothing to test
        v = sf::bvar(fit[rng() % fit.size()]);
      } else {
        v = s.gen.term(c, h.type.atom, 2);
      }
      rho.push_back({h.name, {names, v}, h.param});
    }

    auto m = sf::instantiate(r, vctx, pnames, rho);
    sf::Ctx vpsi = s.psi;
    for (std::size_t k = 0; k < vpsi.size(); ++k) vpsi.entries[k].name = vctx[k];
    sf::check_sf_term(s.sig(), sf::empty_ambient(), vpsi, m, sf::atom(a));

    auto got = sf::match_sf(vctx, pnames, r, m);
    expect(got.has_value(), sf::show(r) + " does not match its instance " + sf::show(m));
    expect(got->size() == rho.size(), "match of " + sf::show(r) + " bound " + show_bindings(*got));
    for (std::size_t k = 0; k < rho.size(); ++k)
      expect((*got)[k].name == rho[k].name && (*got)[k].param == rho[k].param &&
                 sf::alpha_eq((*got)[k].value, rho[k].value),
             "match of " + sf::show(r) + " against " + sf::show(m) + " gave " + show_bindings(*got) + ", expected " +
                 show_bindings(rho));
    auto again = sf::match_sf(vctx, pnames, r, m);
    expect(again && show_bindings(*again) == show_bindings(*got), "matching is not deterministic on " + sf::show(m));
    auto back = sf::instantiate(r, vctx, pnames, *got);
    expect(sf::alpha_eq(back, m), "re-instantiation gives " + describe(back, m));

    // An unrelated term: a match must explain it.
    auto other = s.gen.term(vpsi, a, 3);
    if (auto hit = sf::match_sf(vctx, pnames, r, other)) {
      auto rebuilt = sf::instantiate(r, vctx, pnames, *hit);
      expect(sf::alpha_eq(rebuilt, other), "match of " + sf::show(r) + " explains " + describe(other, rebuilt));
    }
  });
}

std::vector<std::string> generate_programs(std::uint64_t seed, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::mt19937_64 rng(seed + i);
    out.push_back(gen::program(rng));
  }
  return out;
}

namespace {

Result over_programs(const std::string& name, const std::vector<std::string>& programs,
                     const std::function<void(const std::string&, Result&)>& body) {
  Result r;
  r.name = name;
  auto t0 = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < programs.size(); ++i) {
    std::string why;
    try {
      with_big_stack([&] {
        body(programs[i], r);
        return 0;
      });
    } catch (const Failed& f) {
      why = f.why;
    } catch (const Error& e) {
      why = e.diag().str();
    }
    ++r.cases;
    if (!why.empty()) {
      ++r.failures;
      if (r.examples.size() < kExamples) r.examples.push_back("program " + std::to_string(i) + ": " + why);
    }
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace

Result preservation(const std::vector<std::string>& programs) {
  return over_programs("type preservation", programs, [](const std::string& text, Result&) {
    auto report = translate::verify_preservation(parse_program(text));
    expect(report.ok(), report.str());
  });
}

Result preservation(std::uint64_t seed, std::size_t n) { return preservation(generate_programs(seed, n)); }

Result differential(const std::vector<std::string>& programs, std::size_t fuel) {
  return over_programs("source/target agreement", programs, [fuel](const std::string& text, Result& res) {
    auto checked = ml::check_program(parse_program(text));
    const auto& p = checked.program;
    auto t = translate::trans_program(p);
    ml::ValuePtr sv;
    std::optional<Code> source_error;
    try {
      Fuel f(fuel);
      sv = ml::run_main(p, f);
    } catch (const Error& e) {
      source_error = e.code();
    }
    if (source_error == Code::FuelExhausted) {
      ++res.fuel_exhausted;
      return;
    }
    target::ValuePtr tv;
    std::optional<Code> target_error;
    try {
      Fuel f(fuel * 100);
      tv = target::run_main(t.program, f);
    } catch (const Error& e) {
      target_error = e.code();
    }
    if (source_error) {
      expect(target_error == source_error, "source fails with " + std::string(code_name(*source_error)) +
                                               ", target " +
                                               (target_error ? std::string(code_name(*target_error)) : "returns " + target::show(tv)));
      return;
    }
    expect(!target_error, "source returns " + ml::show(sv) + ", target fails with " +
                              (target_error ? std::string(code_name(*target_error)) : ""));
    auto expected = translate::trans_value(p, sv, p.find_def(*p.main)->type);
    expect(target::value_equal(expected, tv),
           "source returns " + ml::show(sv) + ", target " + target::show(tv) + ", expected " + target::show(expected));
  });
}

Result differential(std::uint64_t seed, std::size_t n, std::size_t fuel) {
  return differential(generate_programs(seed, n), fuel);
}

std::string summary(const Result& r) {
  std::string s = r.name + ": " + std::to_string(r.cases - r.failures) + "/" + std::to_string(r.cases) + " passed";
  if (r.fuel_exhausted) s += ", " + std::to_string(r.fuel_exhausted) + " out of fuel";
  char buf[32];
  std::snprintf(buf, sizeof buf, " in %.2fs", r.seconds);
  return s + buf;
}

}  // namespace sfbox::driver::props

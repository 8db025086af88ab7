#include <CLI11.hpp>

#include <iostream>

#include "sfbox/coreml/check.hpp"
#include "sfbox/coreml/eval.hpp"
#include "sfbox/coreml/print.hpp"
#include "sfbox/driver/dump.hpp"
#include "sfbox/driver/parse.hpp"
#include "sfbox/driver/props.hpp"
#include "sfbox/driver/stack.hpp"
#include "sfbox/fuel.hpp"
#include "sfbox/target/eval.hpp"
#include "sfbox/translate/translate.hpp"
#include "sfbox/translate/verify.hpp"

using namespace sfbox;

namespace {

enum Exit { kOk = 0, kDiagnostics = 1, kMatchFailure = 2, kFuelExhausted = 3, kInvariant = 4 };

int exit_code(Code c) {
  switch (c) {
    case Code::MatchFailure: return kMatchFailure;
    case Code::FuelExhausted: return kFuelExhausted;
    case Code::InternalInvariantViolation:
    case Code::UnsatisfiableBranchReached: return kInvariant;
    default: return kDiagnostics;
  }
}

struct Options {
  std::string file;
  std::uint64_t fuel = 100000;
  std::uint64_t seed = 1;
  std::size_t count = 1000;
  std::string emit = "text";
  bool debug_types = false;
};

void report(const std::string& file, const Diagnostic& d) {
  std::cerr << file << (d.loc.line ? ":" : ": ") << d.str() << "\n";
}

ml::Checked load(const Options& o) {
  auto checked = ml::check_program(driver::parse_program(driver::read_file(o.file)));
  for (const auto& w : checked.warnings) report(o.file, w);
  return checked;
}

void print_types(const ml::Program& p) {
  for (const auto& d : p.defs) std::cout << d.name << " : " << ml::show(d.type) << "\n";
}

int check(const Options& o) {
  auto c = load(o);
  if (o.emit == "json") {
    std::cout << driver::dump(c.program).dump(2) << "\n";
    return kOk;
  }
  if (o.debug_types) print_types(c.program);
  std::cout << o.file << ": ok, " << c.program.defs.size() << " definitions\n";
  return kOk;
}

int run(const Options& o) {
  auto c = load(o);
  Fuel fuel(o.fuel);
  auto v = ml::run_main(c.program, fuel);
  std::cout << ml::show(v) << "\n";
  return kOk;
}

int translate_file(const Options& o) {
  auto r = translate::verify_preservation(driver::parse_program(driver::read_file(o.file)));
  for (const auto& w : r.source_warnings) report(o.file, w);
  if (!r.source_ok) {
    report(o.file, *r.source_error);
    return kDiagnostics;
  }
  if (!r.ok()) {
    std::cerr << r.str();
    return kInvariant;
  }
  const auto& t = r.translation->program;
  if (o.emit == "json") {
    std::cout << driver::dump(t).dump(2) << "\n";
    return kOk;
  }
  if (o.debug_types)
    for (const auto& d : t.defs) std::cout << d.name << " : " << target::show(d.type) << "\n";
  std::cout << target::show(t);
  return kOk;
}

int diff(const Options& o) {
  auto c = load(o);
  auto t = translate::trans_program(c.program);
  Fuel f1(o.fuel);
  auto sv = ml::run_main(c.program, f1);
  Fuel f2(o.fuel * 100);
  auto tv = target::run_main(t.program, f2);
  auto expected = translate::trans_value(c.program, sv, c.program.find_def(*c.program.main)->type);
  std::cout << "source: " << ml::show(sv) << "\n";
  std::cout << "target: " << target::show(tv) << "\n";
  if (!target::value_equal(expected, tv)) {
    std::cout << "disagree: expected " << target::show(expected) << "\n";
    return kInvariant;
  }
  std::cout << "agree\n";
  return kOk;
}

int proptest(const Options& o) {
  namespace P = driver::props;
  std::vector<P::Result> results{P::subst_identity(o.seed, o.count), P::subst_composition(o.seed, o.count),
                                 P::subst_lemma(o.seed, o.count),    P::match_roundtrip(o.seed, o.count),
                                 P::preservation(o.seed, o.count),   P::differential(o.seed, o.count, o.fuel)};
  bool ok = true;
  for (const auto& r : results) {
    std::cout << (r.ok() ? "PASS " : "FAIL ") << P::summary(r) << "\n";
    for (const auto& e : r.examples) std::cout << "  " << e << "\n";
    ok = ok && r.ok();
  }
  return ok ? kOk : kInvariant;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sfbox: check, run and translate programs over contextual SF objects"};
  app.require_subcommand(1);
  Options o;

  auto add_file = [&](CLI::App* sub) { sub->add_option("file", o.file, "source file")->required(); };
  auto add_fuel = [&](CLI::App* sub) { sub->add_option("--fuel", o.fuel, "evaluation steps before giving up"); };
  auto add_emit = [&](CLI::App* sub) {
    sub->add_option("--emit", o.emit, "output format")->check(CLI::IsMember({"text", "json"}));
  };
  auto add_debug = [&](CLI::App* sub) { sub->add_flag("--debug-types", o.debug_types, "print the type of every definition"); };

  auto* check_cmd = app.add_subcommand("check", "type-check a program");
  add_file(check_cmd);
  add_emit(check_cmd);
  add_debug(check_cmd);
  auto* run_cmd = app.add_subcommand("run", "check a program and evaluate main");
  add_file(run_cmd);
  add_fuel(run_cmd);
  auto* translate_cmd = app.add_subcommand("translate", "translate to the target and re-check it");
  add_file(translate_cmd);
  add_emit(translate_cmd);
  add_debug(translate_cmd);
  auto* diff_cmd = app.add_subcommand("diff", "evaluate main in the source and in the translation and compare");
  add_file(diff_cmd);
  add_fuel(diff_cmd);
  auto* prop_cmd = app.add_subcommand("proptest", "run the property suites on generated instances");
  prop_cmd->add_option("--seed", o.seed, "first seed");
  prop_cmd->add_option("--count", o.count, "instances per property");
  add_fuel(prop_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    return driver::with_big_stack([&] {
      if (check_cmd->parsed()) return check(o);
      if (run_cmd->parsed()) return run(o);
      if (translate_cmd->parsed()) return translate_file(o);
      if (diff_cmd->parsed()) return diff(o);
      return proptest(o);
    });
  } catch (const Error& e) {
    report(o.file, e.diag());
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInvariant;
  }
}

#include "sfbox/translate/verify.hpp"

#include <map>
#include <sstream>

#include "sfbox/coreml/check.hpp"
#include "sfbox/target/check.hpp"

namespace sfbox::translate {

const char* lemma_name(Obligation::Kind k) {
  switch (k) {
    case Obligation::Kind::Term: return "terms";
    case Obligation::Kind::Subst: return "substitutions";
    case Obligation::Kind::Pattern: return "patterns";
    case Obligation::Kind::CtxPattern: return "contextual patterns";
  }
  return "?";
}

bool Report::ok() const {
  if (!source_ok || !failures.empty()) return false;
  for (auto& d : decls)
    if (!d.target_ok) return false;
  return true;
}

std::string Report::str() const {
  std::ostringstream o;
  if (!source_ok) {
    o << "source: " << (source_error ? source_error->str() : "rejected") << "\n";
    return o.str();
  }
  for (auto& d : decls) {
    o << d.name << ": source ok, target " << (d.target_ok ? "ok" : d.target_error->str()) << ", lemmas "
      << d.lemmas - d.lemma_failures << "/" << d.lemmas << "\n";
  }
  for (auto& f : failures)
    o << "  lemma " << f.lemma << " failed in " << f.decl << " for " << f.what << ": " << f.diag.str() << "\n";
  o << (ok() ? "preserved" : "NOT preserved") << "\n";
  return o.str();
}

namespace {

void discharge(const T::Signature& sig, const Obligation& ob) {
  T::Constraints d;
  for (auto& v : ob.vars) d.add_var(v);
  for (auto& [a, b] : ob.equalities) d.assume(a, b);
  for (auto b = ob.gamma.get(); b; b = b->next.get()) T::check_type(sig, d, b->type);
  switch (ob.kind) {
    case Obligation::Kind::Term:
    case Obligation::Kind::Subst:
      T::check_expr(sig, d, ob.gamma, ob.expr, ob.type);
      return;
    case Obligation::Kind::Pattern:
    case Obligation::Kind::CtxPattern: {
      auto r = T::check_pattern(sig, d, ob.pattern, ob.type);
      for (auto& v : r.vars) d.add_var(v);
      for (auto& [a, b] : r.equalities) d.assume(a, b);
      std::map<std::string, T::TypePtr> got(r.bindings.begin(), r.bindings.end());
      if (got.size() != ob.bindings.size())
        fail(Code::TypeMismatch, "pattern binds " + std::to_string(got.size()) + " variables, expected " +
                                     std::to_string(ob.bindings.size()));
      for (auto& [x, t] : ob.bindings) {
        auto it = got.find(x);
        if (it == got.end()) fail(Code::TypeMismatch, "pattern does not bind " + x);
        if (!d.entails(it->second, t))
          fail(Code::TypeMismatch, x + " is bound at " + T::show(it->second) + ", expected " + T::show(t));
      }
      return;
    }
  }
}

}  // namespace

void verify_translation(const Translation& t, Report& r) {
  const T::Program& p = t.program;
  r.decls.clear();
  r.failures.clear();
  r.target_warnings.clear();
  std::optional<Diagnostic> sig_error;
  try {
    T::check_signature(p.sig);
  } catch (const Error& e) {
    sig_error = e.diag();
  }
  T::BindingsPtr g = T::builtin_bindings();
  std::map<std::string, std::size_t> index;
  for (auto& d : p.defs) {
    DeclReport dr;
    dr.name = d.name;
    if (sig_error) {
      dr.target_error = sig_error;
    } else {
      try {
        auto w = T::check_expr(p.sig, {}, g, d.body, d.type);
        r.target_warnings.insert(r.target_warnings.end(), w.begin(), w.end());
        dr.target_ok = true;
      } catch (const Error& e) {
        dr.target_error = e.diag();
      }
    }
    g = T::bind(g, d.name, d.type);
    index[d.name] = r.decls.size();
    r.decls.push_back(std::move(dr));
  }
  for (auto& ob : t.obligations) {
    auto it = index.find(ob.decl);
    DeclReport* dr = it == index.end() ? nullptr : &r.decls[it->second];
    if (dr) ++dr->lemmas;
    try {
      discharge(p.sig, ob);
    } catch (const Error& e) {
      if (dr) ++dr->lemma_failures;
      r.failures.push_back({ob.decl, lemma_name(ob.kind), ob.what, e.diag()});
    }
  }
}

Report verify_preservation(const ml::Program& source) {
  Report r;
  ml::Checked checked;
  try {
    checked = ml::check_program(source);
  } catch (const Error& e) {
    r.source_error = e.diag();
    return r;
  }
  r.source_ok = true;
  r.source_warnings = checked.warnings;
  try {
    r.translation = trans_program(checked.program);
  } catch (const Error& e) {
    Diagnostic d = e.diag();
    d.code = Code::InternalInvariantViolation;
    r.failures.push_back({"", "translation", "", d});
    return r;
  }
  verify_translation(*r.translation, r);
  return r;
}

}  // namespace sfbox::translate

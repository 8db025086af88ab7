#include "sfbox/sf/subst.hpp"

#include <algorithm>
#include <cctype>

#include "sfbox/diagnostic.hpp"
#include "sfbox/sf/print.hpp"

namespace sfbox::sf {

std::string fresh_name(const std::string& base, const std::function<bool(const std::string&)>& taken) {
  if (!taken(base)) return base;
  std::string root = base;
  while (!root.empty() && std::isdigit(static_cast<unsigned char>(root.back()))) root.pop_back();
  if (root.empty()) root = "x";
  for (unsigned i = 1;; ++i) {
    std::string cand = root + std::to_string(i);
    if (!taken(cand)) return cand;
  }
}

std::string fresh_name(const std::string& base, const ErasedCtx& avoid) {
  return fresh_name(base, [&](const std::string& n) { return std::find(avoid.begin(), avoid.end(), n) != avoid.end(); });
}

Subst identity_subst() { return Subst{}; }

TermPtr lookup_var(const std::string& x, const Subst& sigma, const ErasedCtx& phi, const ErasedCtx& psi) {
  std::size_t i = phi.size();
  while (i > 0 && phi[i - 1] != x) --i;
  if (i == 0) fail(Code::LookupFailure, "variable " + x + " is not in the domain " + show(phi));
  --i;
  const std::size_t k = sigma.entries.size();
  if (phi.size() < k) fail(Code::LookupFailure, "substitution longer than its domain");
  const std::size_t prefix = phi.size() - k;
  if (i >= prefix) return sigma.entries[i - prefix];
  if (sigma.shift > psi.size() || i >= psi.size() - sigma.shift)
    fail(Code::LookupFailure, "variable " + x + " falls outside the shifted range " + show(psi));
  return bvar(psi[i]);
}

Subst contract(Subst s, const ErasedCtx& range) {
  std::size_t drop = 0;
  while (drop < s.entries.size() && s.shift > 0 && s.entries[drop]->kind == Term::Kind::BVar) {
    std::size_t j = range.size() - s.shift;
    const std::string& n = s.entries[drop]->name;
    if (range[j] != n || std::find(range.begin() + static_cast<std::ptrdiff_t>(j) + 1, range.end(), n) != range.end())
      break;
    --s.shift;
    ++drop;
  }
  s.entries.erase(s.entries.begin(), s.entries.begin() + static_cast<std::ptrdiff_t>(drop));
  return s;
}

TermPtr canonical(const ErasedCtx& psi, const TermPtr& m) {
  switch (m->kind) {
    case Term::Kind::BVar:
    case Term::Kind::QVar:
    case Term::Kind::PVar: return m;
    case Term::Kind::Box: return box(canonical({}, m->body));
    case Term::Kind::Lam: {
      ErasedCtx inner = psi;
      inner.push_back(m->name);
      return lam(m->name, canonical(inner, m->body));
    }
    case Term::Kind::Const: {
      std::vector<TermPtr> args;
      for (const auto& a : m->args) args.push_back(canonical(psi, a));
      return const_app(m->name, std::move(args));
    }
    case Term::Kind::Clo: {
      Subst s = m->subst;
      for (auto& e : s.entries) e = canonical(psi, e);
      if (m->body->kind == Term::Kind::QVar) {
        s = contract(std::move(s), psi);
        if (s.shift == 0 && s.entries.empty()) return m->body;
      }
      return clo(m->body, std::move(s), m->domain, m->range);
    }
  }
  return m;
}

TermPtr apply_subst(const Subst& sigma, const ErasedCtx& phi, const ErasedCtx& psi, const TermPtr& m) {
  switch (m->kind) {
    case Term::Kind::BVar: return lookup_var(m->name, sigma, phi, psi);
    case Term::Kind::Box: return m;
    case Term::Kind::QVar: {
      Subst s = contract(sigma, psi);
      if (s.shift == 0 && s.entries.empty()) return m;
      Ctx domain, range;
      for (const auto& n : phi) domain.entries.push_back({n, ""});
      for (const auto& n : psi) range.entries.push_back({n, ""});
      return clo(m, std::move(s), std::move(domain), std::move(range));
    }
    case Term::Kind::PVar: {
      // #v stands for a variable of phi minus its (w - 1) innermost entries.
      const std::size_t k = sigma.entries.size();
      if (m->weakening - 1 < k)
        fail(Code::InternalInvariantViolation, "parameter variable " + show(m) + " may be replaced by " + show(sigma));
      return pvar(m->name, static_cast<unsigned>(m->weakening - k + sigma.shift));
    }
    case Term::Kind::Lam: {
      std::string x = fresh_name(m->name, psi);
      ErasedCtx phi2 = phi, psi2 = psi;
      phi2.push_back(m->name);
      psi2.push_back(x);
      // Entries move under the binder: closures and quoted variables count positions.
      Subst ext{sigma.shift + 1, {}, false};
      for (const auto& e : sigma.entries)
        ext.entries.push_back(is_ground(e) ? e : apply_subst(Subst{1, {}, false}, psi, psi2, e));
      ext.entries.push_back(bvar(x));
      return lam(x, apply_subst(ext, phi2, psi2, m->body));
    }
    case Term::Kind::Const: {
      std::vector<TermPtr> args;
      args.reserve(m->args.size());
      for (const auto& a : m->args) args.push_back(apply_subst(sigma, phi, psi, a));
      return const_app(m->name, std::move(args));
    }
    case Term::Kind::Clo: {
      Subst composed = compose_subst(sigma, phi, psi, m->subst);
      TermPtr body = m->body;
      if (body->kind == Term::Kind::QVar) {
        composed = contract(composed, psi);
        if (composed.shift == 0 && composed.entries.empty()) return body;
        Ctx range;
        for (const auto& n : psi) range.entries.push_back({n, ""});
        return clo(body, std::move(composed), m->domain, std::move(range));
      }
      return apply_subst(composed, erase(m->domain), psi, body);
    }
  }
  fail(Code::InternalInvariantViolation, "unknown SF term");
}

TermPtr apply_subst(const Subst& sigma, const Ctx& phi, const Ctx& psi, const TermPtr& m) {
  return apply_subst(sigma, erase(phi), erase(psi), m);
}

Subst compose_subst(const Subst& sigma, const ErasedCtx& mid, const ErasedCtx& psi, const Subst& inner) {
  const std::size_t k = sigma.entries.size();
  Subst out;
  if (inner.shift <= k) {
    out.shift = sigma.shift;
    out.entries.assign(sigma.entries.begin(), sigma.entries.end() - static_cast<std::ptrdiff_t>(inner.shift));
  } else {
    out.shift = sigma.shift + (inner.shift - k);
  }
  for (const auto& e : inner.entries) out.entries.push_back(apply_subst(sigma, mid, psi, e));
  return out;
}

TermPtr rename_ctx(const ErasedCtx& from, const ErasedCtx& to, const TermPtr& m) {
  if (from.size() != to.size())
    fail(Code::InternalInvariantViolation, "renaming between contexts of different length: " + show(from) + " / " + show(to));
  if (from == to) return m;
  Subst s{to.size(), {}, false};
  for (const auto& n : to) s.entries.push_back(bvar(n));
  return apply_subst(s, from, to, m);
}

}  // namespace sfbox::sf

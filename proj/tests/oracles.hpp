#pragma once

// Independent reference implementations used to cross-check the library.

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sfbox/sf/syntax.hpp"
#include "sfbox/target/eval.hpp"
#include "sfbox/target/syntax.hpp"

namespace oracle {

namespace sf = sfbox::sf;

using sfbox::target::TypePtr;
using sfbox::target::ValuePtr;

// Equality closure by saturation: reflexivity, symmetry, transitivity, congruence and
// injectivity over every subterm in sight, iterated to a fixpoint.
inline bool naive_entails(const std::vector<std::pair<TypePtr, TypePtr>>& eqs, const TypePtr& a, const TypePtr& b) {
  using sfbox::target::show;
  std::map<std::string, TypePtr> terms;
  std::function<void(const TypePtr&)> collect = [&](const TypePtr& t) {
    terms.emplace(show(t), t);
    for (auto& k : t->args) collect(k);
  };
  for (auto& [x, y] : eqs) {
    collect(x);
    collect(y);
  }
  collect(a);
  collect(b);
  std::set<std::pair<std::string, std::string>> rel;
  for (auto& [s, t] : terms) rel.emplace(s, s);
  for (auto& [x, y] : eqs) {
    rel.emplace(show(x), show(y));
    rel.emplace(show(y), show(x));
  }
  for (bool changed = true; changed;) {
    changed = false;
    auto add = [&](const std::string& x, const std::string& y) {
      if (rel.emplace(x, y).second) changed = true;
      if (rel.emplace(y, x).second) changed = true;
    };
    auto snapshot = rel;
    for (auto& [x, y] : snapshot)
      for (auto& [s, t] : terms)
        if (snapshot.count({y, s})) add(x, s);
    for (auto& [s, t] : terms)
      for (auto& [s2, t2] : terms) {
        if (t->kind != t2->kind || t->name != t2->name || t->args.size() != t2->args.size() || t->args.empty())
          continue;
        bool all = true;
        for (std::size_t i = 0; i < t->args.size(); ++i)
          all = all && rel.count({show(t->args[i]), show(t2->args[i])});
        if (all) add(s, s2);
        if (rel.count({s, s2}))
          for (std::size_t i = 0; i < t->args.size(); ++i) add(show(t->args[i]), show(t2->args[i]));
      }
  }
  return rel.count({show(a), show(b)}) != 0;
}

// Well-scoped de Bruijn terms over app/lam: variables count outward from the innermost binder.
struct DB {
  enum class Kind { Var, App, Lam };
  Kind kind;
  int index = 0;
  std::shared_ptr<const DB> a, b;
};
using DBPtr = std::shared_ptr<const DB>;

inline DBPtr db_var(int i) { return std::make_shared<const DB>(DB{DB::Kind::Var, i, nullptr, nullptr}); }
inline DBPtr db_app(DBPtr a, DBPtr b) {
  return std::make_shared<const DB>(DB{DB::Kind::App, 0, std::move(a), std::move(b)});
}
inline DBPtr db_lam(DBPtr a) { return std::make_shared<const DB>(DB{DB::Kind::Lam, 0, std::move(a), nullptr}); }

inline bool db_equal(const DBPtr& x, const DBPtr& y) {
  if (x->kind != y->kind) return false;
  switch (x->kind) {
    case DB::Kind::Var:
      return x->index == y->index;
    case DB::Kind::App:
      return db_equal(x->a, y->a) && db_equal(x->b, y->b);
    case DB::Kind::Lam:
      return db_equal(x->a, y->a);
  }
  return false;
}

using DBSubst = std::function<DBPtr(int)>;

inline DBPtr db_apply(const DBPtr& t, const DBSubst& s) {
  switch (t->kind) {
    case DB::Kind::Var:
      return s(t->index);
    case DB::Kind::App:
      return db_app(db_apply(t->a, s), db_apply(t->b, s));
    case DB::Kind::Lam: {
      DBSubst up = [&](int i) -> DBPtr {
        if (i == 0) return db_var(0);
        return db_apply(s(i - 1), [](int j) { return db_var(j + 1); });
      };
      return db_lam(db_apply(t->a, up));
    }
  }
  return t;
}

// Embedded values: Var(Pop^k Top), C(app, [a; b]), C(lam, [Lam m]).
inline ValuePtr v(const char* k, ValuePtr arg = nullptr) { return sfbox::target::con_value(k, std::move(arg)); }
inline ValuePtr vp(ValuePtr a, ValuePtr b) { return sfbox::target::pair_value(std::move(a), std::move(b)); }

inline ValuePtr spine(std::vector<ValuePtr> args) {
  ValuePtr sp = v("Empty");
  for (auto it = args.rbegin(); it != args.rend(); ++it) sp = v("Cons", vp(*it, sp));
  return sp;
}

inline ValuePtr embed(const DBPtr& t) {
  switch (t->kind) {
    case DB::Kind::Var: {
      ValuePtr x = v("Top");
      for (int i = 0; i < t->index; ++i) x = v("Pop", x);
      return v("Var", x);
    }
    case DB::Kind::App:
      return v("C", vp(v("app"), spine({embed(t->a), embed(t->b)})));
    case DB::Kind::Lam:
      return v("C", vp(v("lam"), spine({v("Lam", embed(t->a))})));
  }
  return nullptr;
}

inline ValuePtr embed_shift(int k) {
  ValuePtr s = v("Id");
  for (int i = 0; i < k; ++i) s = v("Suc", s);
  return v("Shift", s);
}

// Substitution with range of length m and domain of length n: either a pure shift or
// Dot over a smaller one.
struct DBSub {
  int shift;
  std::vector<DBPtr> entries;  // innermost last
};

inline ValuePtr embed(const DBSub& s) {
  ValuePtr out = embed_shift(s.shift);
  for (auto& m : s.entries) out = v("Dot", vp(out, embed(m)));
  return out;
}

inline DBSubst as_function(const DBSub& s) {
  return [s](int i) -> DBPtr {
    int n = static_cast<int>(s.entries.size());
    if (i < n) return s.entries[static_cast<std::size_t>(n - 1 - i)];
    return db_var(i - n + s.shift);
  };
}

// All terms of depth at most d with free variables below n.
inline std::vector<DBPtr> db_terms(int n, int d) {
  std::vector<DBPtr> out;
  if (d <= 0) return out;
  for (int i = 0; i < n; ++i) out.push_back(db_var(i));
  if (d == 1) return out;
  auto smaller = db_terms(n, d - 1);
  for (auto& a : smaller)
    for (auto& b : smaller) out.push_back(db_app(a, b));
  for (auto& b : db_terms(n + 1, d - 1)) out.push_back(db_lam(b));
  return out;
}

// Independent oracle: simultaneous capture-avoiding substitution on named terms, with the
// substitution given as a finite map and the free names of the range listed explicitly.
inline sf::TermPtr naive_subst(const std::map<std::string, sf::TermPtr>& s, const std::set<std::string>& range, const sf::TermPtr& m) {
  switch (m->kind) {
    case sf::Term::Kind::BVar: {
      auto it = s.find(m->name);
      return it == s.end() ? m : it->second;
    }
    case sf::Term::Kind::Lam: {
      std::string x = m->name;
      int i = 0;
      while (range.count(x)) x = m->name + "_" + std::to_string(++i);
      auto s2 = s;
      s2[m->name] = sf::bvar(x);
      auto r2 = range;
      r2.insert(x);
      return sf::lam(x, naive_subst(s2, r2, m->body));
    }
    case sf::Term::Kind::Const: {
      std::vector<sf::TermPtr> args;
      for (const auto& a : m->args) args.push_back(naive_subst(s, range, a));
      return sf::const_app(m->name, args);
    }
    default: return m;
  }
}

}  // namespace oracle

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sfbox/sf/syntax.hpp"

namespace sfbox::sf {

// What the surrounding ML context knows about a quoted or parameter variable.
struct AmbientEntry {
  ContextualType type;
  bool param = false;  // bound by a #x pattern: its value is a single variable
};

using Ambient = std::function<std::optional<AmbientEntry>(const std::string&)>;

Ambient empty_ambient();

// Each checker returns the input elaborated: shifts of `_` substitutions made explicit and
// closures annotated with their domain and range.
TermPtr check_sf_term(const Signature& sig, const Ambient& amb, const Ctx& psi, const TermPtr& m,
                      const TypePtr& a);
Subst check_sf_subst(const Signature& sig, const Ambient& amb, const Ctx& psi, const Subst& sigma,
                     const Ctx& phi);

struct PatternBinding {
  std::string name;
  ContextualType type;
  bool param = false;
};

std::vector<PatternBinding> check_sf_pattern(const Signature& sig, const Ctx& psi, const PatternPtr& r,
                                             const TypePtr& a);

}  // namespace sfbox::sf

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sfbox/sf/syntax.hpp"

namespace sfbox::sf {

struct MatchBinding {
  std::string name;
  ContextualObject value;
  bool param = false;
};

using Bindings = std::vector<MatchBinding>;

// `value_ctx` is the erased context of the ground term m; `pattern_names` names the same
// positions from the pattern's point of view ("" for entries the pattern leaves anonymous).
std::optional<Bindings> match_sf(const ErasedCtx& value_ctx, const std::vector<std::string>& pattern_names,
                                 const PatternPtr& r, const TermPtr& m);

// Rebuilds the term a pattern denotes under the given bindings, in context `value_ctx`.
TermPtr instantiate(const PatternPtr& r, const ErasedCtx& value_ctx, const std::vector<std::string>& pattern_names,
                    const Bindings& rho);

// Aligns a literal's named suffix with a context of length n: anonymous entries first.
std::vector<std::string> align_names(const std::vector<std::string>& suffix, std::size_t n);

}  // namespace sfbox::sf

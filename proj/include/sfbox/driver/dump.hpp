#pragma once

#include <json.hpp>
#include "sfbox/coreml/syntax.hpp"
#include "sfbox/target/syntax.hpp"

namespace sfbox::driver {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// Every node is an object tagged with "kind"; keys appear in a fixed order and the top level
// carries "schema". Source locations and checker annotations are not part of the dump.
Json dump(const ml::Program& p);
Json dump(const target::Program& p);

// Inverse of dump; malformed input raises SyntaxError.
ml::Program load_source(const Json& j);
target::Program load_target(const Json& j);

}  // namespace sfbox::driver

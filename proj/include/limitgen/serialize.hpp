#ifndef LIMITGEN_SERIALIZE_HPP
#define LIMITGEN_SERIALIZE_HPP

#include <nlohmann/json.hpp>

#include "limitgen/adversaries.hpp"
#include "limitgen/language.hpp"

namespace limitgen {

using Json = nlohmann::json;

/// Structured sets serialize fully; opaque sets serialize by registry name
/// and must be rebuilt from a registered builtin.
Json to_json(const SetExpr& set);
SetExpr set_from_json(const Json& j);

Json to_json(const Collection& coll);
Collection collection_from_json(const Json& j);

Json to_json(const HardInstance& inst);

/// Named opaque builtins loadable from serialized form. Registered out of
/// the box: "squares", "powers" {base}, "multiples" {of}, and
/// "factorial_blocks" (alternating blocks bounded by consecutive
/// factorials).
SetExpr opaque_builtin(const std::string& name,
                       const std::map<std::string, std::uint64_t>& params);

}  // namespace limitgen

#endif

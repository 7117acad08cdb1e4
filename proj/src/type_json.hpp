#pragma once

#include "fedplan/types.hpp"

#include <nlohmann/json.hpp>

#include <functional>
#include <string>

namespace fedplan::detail {

/// Looks up a named type for {"kind":"ref"} nodes; null when refs are not
/// allowed in the current document.
using RefResolver = std::function<TypeExpr(const std::string& name, const std::string& path)>;

TypeExpr type_from_json(const nlohmann::json& node, const std::string& path,
                        const RefResolver& resolve = nullptr);

nlohmann::ordered_json type_to_json(const TypeExpr& t);

}  // namespace fedplan::detail

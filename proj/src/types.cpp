#include "fedplan/types.hpp"

#include "fedplan/error.hpp"

#include <algorithm>

namespace fedplan {

TypeExpr TypeExpr::record(std::vector<Field> fields) {
    std::sort(fields.begin(), fields.end(),
              [](const Field& a, const Field& b) { return a.name < b.name; });
    auto dup = std::adjacent_find(fields.begin(), fields.end(),
                                  [](const Field& a, const Field& b) { return a.name == b.name; });
    if (dup != fields.end())
        throw FedError("E-SYNTAX", "", "duplicate record field \"" + dup->name + "\"");
    TypeExpr t(TypeKind::Record);
    t._fields = std::move(fields);
    return t;
}

TypeExpr TypeExpr::function(std::vector<TypeExpr> params, TypeExpr returns) {
    TypeExpr t(TypeKind::Function);
    t._children = std::move(params);
    t._children.push_back(std::move(returns));
    return t;
}

TypeExpr TypeExpr::array(TypeExpr element) {
    TypeExpr t(TypeKind::Array);
    t._children.push_back(std::move(element));
    return t;
}

bool TypeExpr::is_primitive() const noexcept {
    return _kind == TypeKind::String || _kind == TypeKind::Number || _kind == TypeKind::Boolean;
}

const Field* TypeExpr::field(const std::string& name) const noexcept {
    auto it = std::lower_bound(_fields.begin(), _fields.end(), name,
                               [](const Field& f, const std::string& n) { return f.name < n; });
    return it != _fields.end() && it->name == name ? &*it : nullptr;
}

std::vector<TypeExpr> TypeExpr::params() const {
    if (_kind != TypeKind::Function) return {};
    return {_children.begin(), _children.end() - 1};
}

const TypeExpr& TypeExpr::returns() const { return _children.back(); }

const TypeExpr& TypeExpr::element() const { return _children.front(); }

std::size_t TypeExpr::depth() const noexcept {
    std::size_t d = 0;
    for (const auto& c : _children) d = std::max(d, c.depth());
    for (const auto& f : _fields) d = std::max(d, f.type.depth());
    return d + 1;
}

bool operator==(const TypeExpr& a, const TypeExpr& b) {
    return a._kind == b._kind && a._fields == b._fields && a._children == b._children;
}

std::string_view kind_name(TypeKind k) noexcept {
    switch (k) {
        case TypeKind::String: return "string";
        case TypeKind::Number: return "number";
        case TypeKind::Boolean: return "boolean";
        case TypeKind::Record: return "record";
        case TypeKind::Function: return "function";
        case TypeKind::Array: return "array";
        case TypeKind::Unknown: return "unknown";
    }
    return "unknown";
}

std::optional<std::string> first_mismatch(const TypeExpr& actual, const TypeExpr& expected) {
    if (expected.kind() == TypeKind::Unknown) return std::nullopt;
    if (actual.kind() != expected.kind()) return std::string{};

    switch (expected.kind()) {
        case TypeKind::Record:
            for (const auto& want : expected.fields()) {
                const Field* have = actual.field(want.name);
                std::string here = ".fields." + want.name;
                if (!have) {
                    if (want.optional) continue;
                    return here;
                }
                // an optional actual field may be absent, so it cannot meet a required one
                if (have->optional && !want.optional) return here;
                if (auto sub = first_mismatch(have->type, want.type)) return here + *sub;
            }
            return std::nullopt;

        case TypeKind::Function: {
            auto have = actual.params();
            auto want = expected.params();
            if (have.size() > want.size()) return std::string(".params");
            for (std::size_t i = 0; i < have.size(); ++i) {
                // contravariant
                if (auto sub = first_mismatch(want[i], have[i]))
                    return ".params[" + std::to_string(i) + "]" + *sub;
            }
            if (auto sub = first_mismatch(actual.returns(), expected.returns()))
                return ".returns" + *sub;
            return std::nullopt;
        }

        case TypeKind::Array:
            if (auto sub = first_mismatch(actual.element(), expected.element()))
                return ".element" + *sub;
            return std::nullopt;

        default:
            return std::nullopt;  // same primitive kind
    }
}

bool is_subtype(const TypeExpr& actual, const TypeExpr& expected) {
    return !first_mismatch(actual, expected).has_value();
}

}  // namespace fedplan

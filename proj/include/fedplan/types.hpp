#pragma once

#include <optional>
#include <string>
#include <vector>

namespace fedplan {

enum class TypeKind { String, Number, Boolean, Record, Function, Array, Unknown };

struct Field;

/// A finite structural type term. Record fields are kept sorted by name so
/// that equal types compare equal regardless of declaration order.
class TypeExpr {
public:
    TypeExpr() = default;  // unknown

    static TypeExpr string() { return TypeExpr(TypeKind::String); }
    static TypeExpr number() { return TypeExpr(TypeKind::Number); }
    static TypeExpr boolean() { return TypeExpr(TypeKind::Boolean); }
    static TypeExpr unknown() { return TypeExpr(TypeKind::Unknown); }
    /// Throws FedError E-SYNTAX on duplicate field names.
    static TypeExpr record(std::vector<Field> fields);
    static TypeExpr function(std::vector<TypeExpr> params, TypeExpr returns);
    static TypeExpr array(TypeExpr element);

    TypeKind kind() const noexcept { return _kind; }
    bool is_primitive() const noexcept;

    const std::vector<Field>& fields() const noexcept { return _fields; }
    const Field* field(const std::string& name) const noexcept;

    /// Function parameters. Empty for other kinds.
    std::vector<TypeExpr> params() const;
    const TypeExpr& returns() const;
    const TypeExpr& element() const;

    std::size_t depth() const noexcept;

    friend bool operator==(const TypeExpr& a, const TypeExpr& b);

private:
    explicit TypeExpr(TypeKind k) : _kind(k) {}

    TypeKind _kind = TypeKind::Unknown;
    std::vector<Field> _fields;
    // function: params followed by the return type; array: the element type
    std::vector<TypeExpr> _children;
};

struct Field {
    std::string name;
    TypeExpr type;
    bool optional = false;

    friend bool operator==(const Field&, const Field&) = default;
};

std::string_view kind_name(TypeKind k) noexcept;

/// Path to the first sub-term where `actual` fails to be a subtype of
/// `expected`, or nullopt when it is one. The root is the empty path;
/// children are ".returns", ".params[i]", ".element" and ".fields.<name>".
std::optional<std::string> first_mismatch(const TypeExpr& actual, const TypeExpr& expected);

bool is_subtype(const TypeExpr& actual, const TypeExpr& expected);

}  // namespace fedplan

#include <map>

namespace fedplan {

/// The exported surface of one exposed module.
struct InterfaceDecl {
    std::map<std::string, TypeExpr> exports;

    friend bool operator==(const InterfaceDecl&, const InterfaceDecl&) = default;
};

}  // namespace fedplan

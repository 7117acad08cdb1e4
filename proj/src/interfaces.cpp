#include "fedplan/interfaces.hpp"

#include "json_util.hpp"
#include "type_json.hpp"

#include <set>

namespace fedplan {

namespace detail {

TypeExpr type_from_json(const nlohmann::json& node, const std::string& path, const RefResolver& resolve) {
    expect_object(node, path);
    std::string kind = get_string(node, "kind", path);

    if (kind == "string") return TypeExpr::string();
    if (kind == "number") return TypeExpr::number();
    if (kind == "boolean") return TypeExpr::boolean();
    if (kind == "unknown") return TypeExpr::unknown();
    if (kind == "array")
        return TypeExpr::array(type_from_json(require(node, "element", path), path + ".element", resolve));
    if (kind == "function") {
        const json& params = require(node, "params", path);
        expect_array(params, path + ".params");
        std::vector<TypeExpr> ps;
        for (std::size_t i = 0; i < params.size(); ++i)
            ps.push_back(type_from_json(params[i], path + ".params[" + std::to_string(i) + "]", resolve));
        return TypeExpr::function(std::move(ps),
                                  type_from_json(require(node, "returns", path), path + ".returns", resolve));
    }
    if (kind == "record") {
        const json& fields = require(node, "fields", path);
        expect_object(fields, path + ".fields");
        std::vector<Field> fs;
        for (const auto& [name, spec] : fields.items()) {
            std::string fp = path + ".fields." + name;
            expect_object(spec, fp);
            bool optional = spec.contains("optional") ? get_bool(spec, "optional", fp) : false;
            fs.push_back({name, type_from_json(require(spec, "type", fp), fp + ".type", resolve), optional});
        }
        try {
            return TypeExpr::record(std::move(fs));
        } catch (const FedError& e) {
            throw FedError(e.code(), path, e.detail());
        }
    }
    if (kind == "ref") {
        if (!resolve) throw FedError("E-SYNTAX", path, "type references are only allowed in interface files");
        return resolve(get_string(node, "name", path), path);
    }
    throw FedError("E-SYNTAX", path + ".kind", "unknown type kind \"" + kind + "\"");
}

nlohmann::ordered_json type_to_json(const TypeExpr& t) {
    nlohmann::ordered_json j;
    j["kind"] = std::string(kind_name(t.kind()));
    switch (t.kind()) {
        case TypeKind::Record:
            j["fields"] = nlohmann::ordered_json::object();
            for (const auto& f : t.fields())
                j["fields"][f.name] = {{"type", type_to_json(f.type)}, {"optional", f.optional}};
            break;
        case TypeKind::Function:
            j["params"] = nlohmann::ordered_json::array();
            for (const auto& p : t.params()) j["params"].push_back(type_to_json(p));
            j["returns"] = type_to_json(t.returns());
            break;
        case TypeKind::Array: j["element"] = type_to_json(t.element()); break;
        default: break;
    }
    return j;
}

}  // namespace detail

InterfaceDecl parse_interface(std::string_view text) {
    auto doc = detail::parse_json(text, "");
    detail::expect_object(doc, ".");
    const auto& exports = detail::require(doc, "exports", "");
    detail::expect_object(exports, ".exports");

    InterfaceDecl out;
    std::vector<std::string> resolving;
    detail::RefResolver resolve = [&](const std::string& name, const std::string& path) -> TypeExpr {
        if (auto it = out.exports.find(name); it != out.exports.end()) return it->second;
        if (std::find(resolving.begin(), resolving.end(), name) != resolving.end())
            throw FedError("E-RECURSIVE-TYPE", path, "type \"" + name + "\" refers to itself");
        auto node = exports.find(name);
        if (node == exports.end())
            throw FedError("E-SYNTAX", path, "reference to undeclared export \"" + name + "\"");
        resolving.push_back(name);
        TypeExpr t = detail::type_from_json(*node, ".exports." + name, resolve);
        resolving.pop_back();
        out.exports.emplace(name, t);
        return t;
    };
    for (const auto& [name, _] : exports.items()) resolve(name, ".exports." + name);
    return out;
}

std::string serialize_interface(const InterfaceDecl& decl) {
    nlohmann::ordered_json doc;
    doc["exports"] = nlohmann::ordered_json::object();
    for (const auto& [name, t] : decl.exports) doc["exports"][name] = detail::type_to_json(t);
    return doc.dump(2) + "\n";
}

TypeExpr parse_type(std::string_view text) {
    return detail::type_from_json(detail::parse_json(text, ""), "");
}

std::string serialize_type(const TypeExpr& t) { return detail::type_to_json(t).dump(); }

std::vector<Expectation> collect_expectations(const Workspace& w) {
    std::vector<Expectation> out;
    for (const auto* app : w.applications())
        out.insert(out.end(), app->expects.begin(), app->expects.end());
    return out;
}

std::vector<Diagnostic> check_compatibility(const Workspace& w,
                                            const std::vector<Expectation>& expectations,
                                            const CompatOptions& opts) {
    std::vector<Diagnostic> out;
    for (const auto& e : expectations) {
        const std::string target = e.target();
        const FederationManifest* provider = w.find(e.remote);
        const ExposeDecl* expose = provider ? provider->find_expose(e.exposeId) : nullptr;
        if (!expose) {
            out.push_back(error("E-UNKNOWN-TARGET", target,
                                e.consumer + " expects " + target + " but no such expose exists"));
            continue;
        }
        auto iface = w.interfaces.find(ModuleKey{provider->name, expose->module});
        if (iface == w.interfaces.end()) {
            std::string msg = provider->name + " declares no interface for " + e.exposeId;
            out.push_back(opts.strictTypes ? error("E-NO-INTERFACE", target, msg)
                                           : warning("E-NO-INTERFACE", target, msg));
            continue;
        }
        auto exp = iface->second.exports.find(e.exportName);
        if (exp == iface->second.exports.end()) {
            out.push_back(error("E-MISSING-EXPORT", target,
                                e.exposeId + " does not export \"" + e.exportName + "\""));
            continue;
        }
        if (auto path = first_mismatch(exp->second, e.expected)) {
            out.push_back(error("E-TYPE-MISMATCH", *path,
                                e.consumer + " expects " + target + ": provided type is not compatible at " +
                                    (path->empty() ? std::string("<root>") : *path)));
        }
    }
    return out;
}

}  // namespace fedplan

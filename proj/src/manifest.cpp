#include "fedplan/manifest.hpp"

#include "fedplan/interfaces.hpp"
#include "json_util.hpp"
#include "type_json.hpp"

#include <algorithm>
#include <set>

namespace fedplan {

using detail::json;
using ojson = nlohmann::ordered_json;

ImportRef ImportRef::parse(std::string_view text) {
    std::string s(text);
    if (s.starts_with("./")) return local(s);
    if (s.starts_with("@")) return shared(s);
    auto slash = s.find('/');
    if (slash == std::string::npos) return shared(s);
    return to_remote(s.substr(0, slash), s.substr(slash + 1));
}

std::string ImportRef::str() const {
    return kind == Kind::Remote ? remote + "/" + target : target;
}

const ModuleDecl* FederationManifest::find_module(std::string_view id) const noexcept {
    auto it = std::find_if(modules.begin(), modules.end(), [&](const auto& m) { return m.id == id; });
    return it == modules.end() ? nullptr : &*it;
}

const ExposeDecl* FederationManifest::find_expose(std::string_view id) const noexcept {
    auto it = std::find_if(exposes.begin(), exposes.end(), [&](const auto& e) { return e.id == id; });
    return it == exposes.end() ? nullptr : &*it;
}

const SharedSpec* FederationManifest::find_shared(std::string_view package) const noexcept {
    auto it = std::find_if(shared.begin(), shared.end(),
                           [&](const auto& s) { return s.package == package; });
    return it == shared.end() ? nullptr : &*it;
}

bool FederationManifest::is_exposed(std::string_view moduleId) const noexcept {
    return std::any_of(exposes.begin(), exposes.end(),
                       [&](const auto& e) { return e.module == moduleId; });
}

namespace {

std::string at(const std::string& path, std::size_t i) {
    return path + "[" + std::to_string(i) + "]";
}

void warn_unknown(const json& obj, std::initializer_list<std::string_view> known,
                  const std::string& path, std::vector<Diagnostic>& out) {
    for (const auto& [key, _] : obj.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end())
            out.push_back(warning("W-UNKNOWN-FIELD", path + "." + key,
                                  "unknown field \"" + key + "\" ignored"));
    }
}

template <class Fn>
auto with_path(const std::string& path, Fn&& fn) {
    try {
        return fn();
    } catch (const FedError& e) {
        if (!e.path().empty()) throw;
        throw FedError(e.code(), path, e.detail());
    }
}

std::vector<ImportRef> parse_imports(const json& obj, std::string_view key, const std::string& path) {
    const json& arr = detail::require(obj, key, path);
    std::string here = path + "." + std::string(key);
    detail::expect_array(arr, here);
    std::vector<ImportRef> out;
    for (std::size_t i = 0; i < arr.size(); ++i)
        out.push_back(ImportRef::parse(detail::as_string(arr[i], at(here, i))));
    return out;
}

const json& array_field(const json& obj, std::string_view key, const std::string& path) {
    const json& arr = detail::require(obj, key, path);
    detail::expect_array(arr, path + "." + std::string(key));
    return arr;
}

Expectation parse_expect(const json& j, const std::string& consumer, const std::string& path,
                         std::vector<Diagnostic>& warnings) {
    detail::expect_object(j, path);
    warn_unknown(j, {"target", "interface"}, path, warnings);
    std::string target = detail::get_string(j, "target", path);
    auto hash = target.rfind('#');
    auto slash = target.find('/');
    if (hash == std::string::npos || slash == std::string::npos || slash > hash || slash == 0 ||
        hash == target.size() - 1)
        throw FedError("E-SYNTAX", path + ".target",
                       "expected \"remote/exposeId#export\", got \"" + target + "\"");
    Expectation e;
    e.consumer = consumer;
    e.remote = target.substr(0, slash);
    e.exposeId = target.substr(slash + 1, hash - slash - 1);
    e.exportName = target.substr(hash + 1);
    e.expected = detail::type_from_json(detail::require(j, "interface", path), path + ".interface");
    return e;
}

}  // namespace

ParsedManifest parse_manifest(std::string_view text) {
    json doc = detail::parse_json(text, "");
    ParsedManifest out;
    auto& m = out.manifest;
    auto& warns = out.warnings;

    detail::expect_object(doc, ".");
    warn_unknown(doc,
                 {"name", "version", "entry", "modules", "exposes", "remotes", "shared", "expects"},
                 "", warns);

    m.name = detail::get_string(doc, "name", "");
    m.version = with_path(".version", [&] {
        return semver::parse_version(detail::get_string(doc, "version", ""));
    });
    if (doc.contains("entry")) m.entry = detail::get_string(doc, "entry", "");

    const json& modules = array_field(doc, "modules", "");
    for (std::size_t i = 0; i < modules.size(); ++i) {
        std::string p = at(".modules", i);
        const json& jm = modules[i];
        detail::expect_object(jm, p);
        warn_unknown(jm, {"id", "sizeBytes", "staticImports", "dynamicImports", "interface"}, p, warns);
        ModuleDecl d;
        d.id = detail::get_string(jm, "id", p);
        d.sizeBytes = detail::get_int(jm, "sizeBytes", p);
        d.staticImports = parse_imports(jm, "staticImports", p);
        d.dynamicImports = parse_imports(jm, "dynamicImports", p);
        if (jm.contains("interface")) d.interface = detail::get_string(jm, "interface", p);
        m.modules.push_back(std::move(d));
    }

    const json& exposes = array_field(doc, "exposes", "");
    for (std::size_t i = 0; i < exposes.size(); ++i) {
        std::string p = at(".exposes", i);
        detail::expect_object(exposes[i], p);
        warn_unknown(exposes[i], {"id", "module"}, p, warns);
        m.exposes.push_back({detail::get_string(exposes[i], "id", p),
                             detail::get_string(exposes[i], "module", p)});
    }

    const json& remotes = array_field(doc, "remotes", "");
    for (std::size_t i = 0; i < remotes.size(); ++i) {
        std::string p = at(".remotes", i);
        detail::expect_object(remotes[i], p);
        warn_unknown(remotes[i], {"name", "manifest"}, p, warns);
        m.remotes.push_back({detail::get_string(remotes[i], "name", p),
                             detail::get_string(remotes[i], "manifest", p)});
    }

    const json& shared = array_field(doc, "shared", "");
    for (std::size_t i = 0; i < shared.size(); ++i) {
        std::string p = at(".shared", i);
        const json& js = shared[i];
        detail::expect_object(js, p);
        warn_unknown(js,
                     {"package", "requiredRange", "providedVersion", "singleton", "eager",
                      "strictVersion", "sizeBytes"},
                     p, warns);
        SharedSpec s;
        s.package = detail::get_string(js, "package", p);
        s.requiredRange = with_path(p + ".requiredRange", [&] {
            return semver::parse_range(detail::get_string(js, "requiredRange", p));
        });
        if (js.contains("providedVersion")) {
            s.providedVersion = with_path(p + ".providedVersion", [&] {
                return semver::parse_version(detail::get_string(js, "providedVersion", p));
            });
        }
        s.singleton = detail::get_bool(js, "singleton", p);
        s.eager = detail::get_bool(js, "eager", p);
        s.strictVersion = detail::get_bool(js, "strictVersion", p);
        s.sizeBytes = detail::get_int(js, "sizeBytes", p);
        m.shared.push_back(std::move(s));
    }

    if (doc.contains("expects")) {
        const json& expects = array_field(doc, "expects", "");
        for (std::size_t i = 0; i < expects.size(); ++i)
            m.expects.push_back(parse_expect(expects[i], m.name, at(".expects", i), warns));
    }
    return out;
}

std::string serialize_manifest(const FederationManifest& m) {
    auto refs = [](const std::vector<ImportRef>& v) {
        ojson arr = ojson::array();
        for (const auto& r : v) arr.push_back(r.str());
        return arr;
    };

    ojson doc;
    doc["name"] = m.name;
    doc["version"] = m.version.str();
    if (m.entry) doc["entry"] = *m.entry;
    doc["modules"] = ojson::array();
    for (const auto& d : m.modules) {
        ojson j;
        j["id"] = d.id;
        j["sizeBytes"] = d.sizeBytes;
        j["staticImports"] = refs(d.staticImports);
        j["dynamicImports"] = refs(d.dynamicImports);
        if (d.interface) j["interface"] = *d.interface;
        doc["modules"].push_back(std::move(j));
    }
    doc["exposes"] = ojson::array();
    for (const auto& e : m.exposes) doc["exposes"].push_back({{"id", e.id}, {"module", e.module}});
    doc["remotes"] = ojson::array();
    for (const auto& r : m.remotes)
        doc["remotes"].push_back({{"name", r.name}, {"manifest", r.manifestPath}});
    doc["shared"] = ojson::array();
    for (const auto& s : m.shared) {
        ojson j;
        j["package"] = s.package;
        j["requiredRange"] = s.requiredRange.str();
        if (s.providedVersion) j["providedVersion"] = s.providedVersion->str();
        j["singleton"] = s.singleton;
        j["eager"] = s.eager;
        j["strictVersion"] = s.strictVersion;
        j["sizeBytes"] = s.sizeBytes;
        doc["shared"].push_back(std::move(j));
    }
    if (!m.expects.empty()) {
        doc["expects"] = ojson::array();
        for (const auto& e : m.expects)
            doc["expects"].push_back(
                {{"target", e.target()}, {"interface", detail::type_to_json(e.expected)}});
    }
    return doc.dump(2) + "\n";
}

std::vector<Diagnostic> validate_manifest(const FederationManifest& m) {
    std::vector<Diagnostic> out;

    if (m.name.empty()) out.push_back(error("E-EMPTY-NAME", ".name", "application name is empty"));

    std::set<std::string> moduleIds;
    for (std::size_t i = 0; i < m.modules.size(); ++i) {
        const auto& d = m.modules[i];
        std::string p = at(".modules", i);
        if (!moduleIds.insert(d.id).second)
            out.push_back(error("E-DUP-MODULE", p + ".id", "duplicate module id \"" + d.id + "\""));
        if (d.sizeBytes < 0)
            out.push_back(error("E-NEGATIVE-SIZE", p + ".sizeBytes", "sizeBytes must be >= 0"));
        if (d.interface && !m.is_exposed(d.id))
            out.push_back(warning("W-UNEXPOSED-INTERFACE", p + ".interface",
                                  "interface declared on module \"" + d.id + "\" that is not exposed"));

        auto check_refs = [&](const std::vector<ImportRef>& refs, const std::string& list) {
            for (std::size_t k = 0; k < refs.size(); ++k) {
                const auto& r = refs[k];
                std::string rp = at(p + "." + list, k);
                switch (r.kind) {
                    case ImportRef::Kind::Local:
                        if (!m.find_module(r.target))
                            out.push_back(error("E-DANGLING-LOCAL", rp,
                                                "import of undeclared module \"" + r.target + "\""));
                        break;
                    case ImportRef::Kind::Remote:
                        if (std::none_of(m.remotes.begin(), m.remotes.end(),
                                         [&](const auto& rr) { return rr.name == r.remote; }))
                            out.push_back(error("E-UNKNOWN-REMOTE", rp,
                                                "import from undeclared remote \"" + r.remote + "\""));
                        break;
                    case ImportRef::Kind::Shared:
                        if (!m.find_shared(r.target))
                            out.push_back(error("E-UNKNOWN-SHARED", rp,
                                                "import of undeclared shared package \"" + r.target + "\""));
                        break;
                }
            }
        };
        check_refs(d.staticImports, "staticImports");
        check_refs(d.dynamicImports, "dynamicImports");
        for (std::size_t k = 0; k < d.dynamicImports.size(); ++k) {
            const auto& r = d.dynamicImports[k];
            if (std::find(d.staticImports.begin(), d.staticImports.end(), r) != d.staticImports.end())
                out.push_back(error("E-IMPORT-BOTH", at(p + ".dynamicImports", k),
                                    "\"" + r.str() + "\" is imported both statically and dynamically"));
        }
    }

    std::set<std::string> exposeIds;
    for (std::size_t i = 0; i < m.exposes.size(); ++i) {
        const auto& e = m.exposes[i];
        std::string p = at(".exposes", i);
        if (!exposeIds.insert(e.id).second)
            out.push_back(error("E-DUP-EXPOSE", p + ".id", "duplicate expose id \"" + e.id + "\""));
        if (!m.find_module(e.module))
            out.push_back(error("E-DANGLING-EXPOSE", p + ".module",
                                "expose \"" + e.id + "\" points at undeclared module \"" + e.module + "\""));
    }

    if (m.entry && !m.find_module(*m.entry))
        out.push_back(error("E-DANGLING-ENTRY", ".entry", "entry \"" + *m.entry + "\" is not a declared module"));

    std::set<std::string> remoteNames;
    for (std::size_t i = 0; i < m.remotes.size(); ++i) {
        const auto& r = m.remotes[i];
        std::string p = at(".remotes", i);
        if (r.name.empty())
            out.push_back(error("E-EMPTY-REMOTE-NAME", p + ".name", "remote name is empty"));
        else if (r.name == m.name)
            out.push_back(error("E-SELF-REMOTE", p + ".name", "remote named after its own application"));
        else if (!remoteNames.insert(r.name).second)
            out.push_back(error("E-DUP-REMOTE", p + ".name", "duplicate remote \"" + r.name + "\""));
    }

    std::set<std::string> packages;
    for (std::size_t i = 0; i < m.shared.size(); ++i) {
        const auto& s = m.shared[i];
        std::string p = at(".shared", i);
        if (!packages.insert(s.package).second)
            out.push_back(error("E-DUP-SHARED", p + ".package", "duplicate shared package \"" + s.package + "\""));
        if (s.sizeBytes < 0)
            out.push_back(error("E-NEGATIVE-SIZE", p + ".sizeBytes", "sizeBytes must be >= 0"));
        if (s.providedVersion && !semver::satisfies(s.requiredRange, *s.providedVersion))
            out.push_back(warning("W-SELF-RANGE", p + ".providedVersion",
                                  s.package + "@" + s.providedVersion->str() +
                                      " does not satisfy its own range " + s.requiredRange.str()));
    }

    for (std::size_t i = 0; i < m.expects.size(); ++i) {
        const auto& e = m.expects[i];
        if (std::none_of(m.remotes.begin(), m.remotes.end(),
                         [&](const auto& rr) { return rr.name == e.remote; }))
            out.push_back(error("E-UNKNOWN-REMOTE", at(".expects", i) + ".target",
                                "expectation targets undeclared remote \"" + e.remote + "\""));
    }
    return out;
}

const FederationManifest* Workspace::find(std::string_view app) const noexcept {
    if (host.name == app) return &host;
    auto it = remotes.find(std::string(app));
    return it == remotes.end() ? nullptr : &it->second;
}

std::vector<const FederationManifest*> Workspace::applications() const {
    std::vector<const FederationManifest*> out{&host};
    for (const auto& [_, m] : remotes) out.push_back(&m);
    return out;
}

namespace {

namespace fs = std::filesystem;

class Loader {
public:
    explicit Loader(const LoadOptions& opts) : _opts(opts) {}

    LoadedWorkspace run(const fs::path& hostPath) {
        visit(hostPath, "");
        _out.workspace.host = std::move(_apps.at(_order.front()).manifest);
        for (std::size_t i = 1; i < _order.size(); ++i) {
            auto& loaded = _apps.at(_order[i]);
            _out.workspace.remotes.emplace(loaded.manifest.name, std::move(loaded.manifest));
        }
        if (!_out.workspace.host.entry)
            _out.diagnostics.push_back(error("E-NO-ENTRY", _out.workspace.host.name + ".entry",
                                             "host application declares no entry module"));
        return std::move(_out);
    }

private:
    struct Loaded {
        FederationManifest manifest;
        fs::path file;
    };

    static fs::path identity(const fs::path& p) {
        std::error_code ec;
        auto c = fs::weakly_canonical(p, ec);
        return ec ? p.lexically_normal() : c;
    }

    // Returns the application name found at `file`.
    std::string visit(const fs::path& given, const std::string& expectedName) {
        const fs::path file = given.lexically_normal();
        fs::path id = identity(file);

        auto onStack = std::find(_stack.begin(), _stack.end(), id);
        if (onStack != _stack.end()) {
            const std::string& target = _apps.at(id).manifest.name;
            if (_opts.allowBidirectional && onStack == _stack.begin()) {
                _out.diagnostics.push_back(warning(
                    "W-BIDIRECTIONAL", _apps.at(_stack.back()).manifest.name + ".remotes",
                    "remote \"" + _apps.at(_stack.back()).manifest.name +
                        "\" consumes the host \"" + target + "\""));
                return target;
            }
            std::string cycle;
            for (auto it = onStack; it != _stack.end(); ++it) cycle += _apps.at(*it).manifest.name + " -> ";
            throw FedError("E-REMOTE-CYCLE", file.string(), "remote manifests form a cycle: " + cycle + target);
        }
        if (auto it = _apps.find(id); it != _apps.end()) return it->second.manifest.name;

        std::string text = detail::read_file(file);
        ParsedManifest parsed;
        try {
            parsed = parse_manifest(text);
        } catch (const FedError& e) {
            throw FedError(e.code(), file.string() + ":" + e.path(), e.detail());
        }
        FederationManifest& m = parsed.manifest;

        if (!expectedName.empty() && m.name != expectedName)
            throw FedError("E-REMOTE-NAME-MISMATCH", file.string(),
                           "referenced as \"" + expectedName + "\" but declares name \"" + m.name + "\"");
        if (auto it = _names.find(m.name); it != _names.end())
            throw FedError("E-DUP-APP", file.string(),
                           "application \"" + m.name + "\" is also declared by " + it->second.string());
        _names.emplace(m.name, file);

        for (auto& d : parsed.warnings) _out.diagnostics.push_back(prefixed(m.name, std::move(d)));
        for (auto& d : validate_manifest(m)) _out.diagnostics.push_back(prefixed(m.name, std::move(d)));

        fs::path dir = file.parent_path();
        for (const auto& mod : m.modules) {
            if (!mod.interface) continue;
            fs::path ip = dir / *mod.interface;
            std::string itext = detail::read_file(ip);
            try {
                _out.workspace.interfaces.emplace(ModuleKey{m.name, mod.id}, parse_interface(itext));
            } catch (const FedError& e) {
                throw FedError(e.code(), ip.string() + ":" + e.path(), e.detail());
            }
        }

        std::set<std::string> seenRemote;
        for (const auto& r : m.remotes) {
            if (!seenRemote.insert(r.name).second)
                throw FedError("E-DUP-APP", file.string(),
                               "two remotes named \"" + r.name + "\" in application \"" + m.name + "\"");
        }

        _order.push_back(id);
        _stack.push_back(id);
        auto remotes = m.remotes;
        _apps.emplace(id, Loaded{std::move(m), file});
        for (const auto& r : remotes) visit(dir / r.manifestPath, r.name);
        _stack.pop_back();
        return _apps.at(id).manifest.name;
    }

    static Diagnostic prefixed(const std::string& app, Diagnostic d) {
        d.path = app + d.path;
        return d;
    }

    LoadOptions _opts;
    LoadedWorkspace _out;
    std::map<fs::path, Loaded> _apps;
    std::map<std::string, fs::path> _names;
    std::vector<fs::path> _order;
    std::vector<fs::path> _stack;
};

}  // namespace

LoadedWorkspace load_workspace(const std::filesystem::path& hostPath, const LoadOptions& opts) {
    return Loader(opts).run(hostPath);
}

}  // namespace fedplan

#include "fedplan/shares.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>

namespace fedplan {

bool ShareResolution::has_errors() const noexcept {
    return std::any_of(conflicts.begin(), conflicts.end(),
                       [](const ShareConflict& c) { return c.severity == Severity::Error; });
}

ShareScope build_share_scope(const Workspace& w) {
    ShareScope scope;
    scope.host = w.host.name;
    for (const auto* app : w.applications())
        for (const auto& s : app->shared) scope.entries.push_back({app->name, s});
    return scope;
}

ShareResolution resolve_shares(const ShareScope& scope) {
    std::map<std::string, std::vector<const ShareEntry*>> byPackage;
    for (const auto& e : scope.entries) byPackage[e.spec.package].push_back(&e);

    ShareResolution out;
    for (auto& [package, entries] : byPackage) {
        std::sort(entries.begin(), entries.end(),
                  [](const ShareEntry* a, const ShareEntry* b) { return a->application < b->application; });

        // Winner: highest version; on ties the host, then the smallest name.
        const ShareEntry* winner = nullptr;
        for (const auto* e : entries) {
            if (!e->spec.providedVersion) continue;
            if (!winner || *e->spec.providedVersion > *winner->spec.providedVersion ||
                (*e->spec.providedVersion == *winner->spec.providedVersion &&
                 e->application == scope.host && winner->application != scope.host))
                winner = e;
        }

        if (!winner) {
            for (const auto* e : entries)
                out.conflicts.push_back({"E-NO-PROVIDER", package, e->application, e->spec.requiredRange,
                                         std::nullopt, Severity::Error});
            continue;
        }

        const semver::Version chosen = *winner->spec.providedVersion;
        out.bindings.emplace(package, ShareBinding{chosen, winner->application, winner->spec.sizeBytes});

        bool singleton = std::any_of(entries.begin(), entries.end(),
                                     [](const ShareEntry* e) { return e->spec.singleton; });
        for (const auto* e : entries) {
            if (semver::satisfies(e->spec.requiredRange, chosen)) continue;
            if (singleton) {
                bool strict = e->spec.strictVersion;
                out.conflicts.push_back({strict ? "E-STRICT-SINGLETON" : "W-SINGLETON-MISMATCH", package,
                                         e->application, e->spec.requiredRange, chosen,
                                         strict ? Severity::Error : Severity::Warning});
            } else if (!e->spec.providedVersion) {
                out.conflicts.push_back({"E-NO-PROVIDER", package, e->application, e->spec.requiredRange,
                                         chosen, Severity::Error});
            } else if (*e->spec.providedVersion != chosen) {
                out.fallbacks.push_back({e->application, package, *e->spec.providedVersion, e->spec.sizeBytes});
                out.duplicateBytes += e->spec.sizeBytes;
            }
        }
    }
    return out;
}

std::string resolution_to_json(const ShareResolution& r) {
    using ojson = nlohmann::ordered_json;
    ojson doc;
    doc["bindings"] = ojson::object();
    for (const auto& [pkg, b] : r.bindings)
        doc["bindings"][pkg] = {{"version", b.version.str()}, {"provider", b.provider}};
    doc["fallbacks"] = ojson::array();
    for (const auto& f : r.fallbacks)
        doc["fallbacks"].push_back({{"application", f.application},
                                    {"package", f.package},
                                    {"version", f.ownVersion.str()},
                                    {"sizeBytes", f.sizeBytes}});
    doc["conflicts"] = ojson::array();
    for (const auto& c : r.conflicts) {
        ojson j;
        j["code"] = c.code;
        j["package"] = c.package;
        j["application"] = c.application;
        j["requiredRange"] = c.requiredRange.str();
        j["chosenVersion"] = c.chosenVersion ? ojson(c.chosenVersion->str()) : ojson(nullptr);
        j["severity"] = std::string(to_string(c.severity));
        doc["conflicts"].push_back(std::move(j));
    }
    doc["duplicateBytes"] = r.duplicateBytes;
    return doc.dump(2) + "\n";
}

}  // namespace fedplan

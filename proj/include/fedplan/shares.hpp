#pragma once

#include "fedplan/manifest.hpp"
#include "fedplan/semver.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fedplan {

struct ShareEntry {
    std::string application;
    SharedSpec spec;

    friend bool operator==(const ShareEntry&, const ShareEntry&) = default;
};

struct ShareScope {
    std::string scopeName = "default";
    std::string host;  // tie-break preference for provider attribution
    std::vector<ShareEntry> entries;
};

struct ShareBinding {
    semver::Version version;
    std::string provider;
    std::int64_t sizeBytes = 0;

    friend bool operator==(const ShareBinding&, const ShareBinding&) = default;
};

/// A participant loading its own copy because the negotiated version is
/// outside its range.
struct ShareFallback {
    std::string application;
    std::string package;
    semver::Version ownVersion;
    std::int64_t sizeBytes = 0;

    friend bool operator==(const ShareFallback&, const ShareFallback&) = default;
};

struct ShareConflict {
    std::string code;  // E-STRICT-SINGLETON, W-SINGLETON-MISMATCH or E-NO-PROVIDER
    std::string package;
    std::string application;
    semver::VersionRange requiredRange;
    std::optional<semver::Version> chosenVersion;  // absent for E-NO-PROVIDER without a binding
    Severity severity = Severity::Error;

    friend bool operator==(const ShareConflict&, const ShareConflict&) = default;
};

struct ShareResolution {
    std::map<std::string, ShareBinding> bindings;
    std::vector<ShareFallback> fallbacks;   // sorted by package, then application
    std::vector<ShareConflict> conflicts;   // sorted by package, then application
    std::int64_t duplicateBytes = 0;

    bool has_errors() const noexcept;

    friend bool operator==(const ShareResolution&, const ShareResolution&) = default;
};

/// Collects every shared declaration, host first then remotes by name.
ShareScope build_share_scope(const Workspace& w);

/// Highest provided version wins. Entries whose range rejects it are bound
/// anyway with a warning (singleton), rejected (strict singleton), or fall
/// back to their own copy (non-singleton). A package is singleton when any
/// participant declares it so.
ShareResolution resolve_shares(const ShareScope& scope);

std::string resolution_to_json(const ShareResolution& r);

}  // namespace fedplan

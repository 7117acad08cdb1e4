#pragma once

#include "fedplan/error.hpp"
#include "fedplan/semver.hpp"
#include "fedplan/types.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fedplan {

/// One import edge as written in a manifest. Encodings: "./x" is local,
/// "remote/./x" names a remote expose, anything else is a shared package.
/// Scoped packages ("@scope/pkg") are shared refs.
struct ImportRef {
    enum class Kind { Local, Remote, Shared };

    Kind kind = Kind::Local;
    std::string remote;  // only for Kind::Remote
    std::string target;  // module id, expose id or package name

    static ImportRef local(std::string id) { return {Kind::Local, {}, std::move(id)}; }
    static ImportRef to_remote(std::string remote, std::string expose) {
        return {Kind::Remote, std::move(remote), std::move(expose)};
    }
    static ImportRef shared(std::string pkg) { return {Kind::Shared, {}, std::move(pkg)}; }

    static ImportRef parse(std::string_view text);
    std::string str() const;

    friend auto operator<=>(const ImportRef&, const ImportRef&) = default;
};

struct ModuleDecl {
    std::string id;
    std::int64_t sizeBytes = 0;
    std::vector<ImportRef> staticImports;
    std::vector<ImportRef> dynamicImports;
    std::optional<std::string> interface;  // path relative to the manifest

    friend bool operator==(const ModuleDecl&, const ModuleDecl&) = default;
};

struct ExposeDecl {
    std::string id;
    std::string module;

    friend bool operator==(const ExposeDecl&, const ExposeDecl&) = default;
};

struct RemoteRef {
    std::string name;
    std::string manifestPath;

    friend bool operator==(const RemoteRef&, const RemoteRef&) = default;
};

struct SharedSpec {
    std::string package;
    semver::VersionRange requiredRange;
    std::optional<semver::Version> providedVersion;  // absent for consumer-only participants
    bool singleton = false;
    bool eager = false;
    bool strictVersion = false;
    std::int64_t sizeBytes = 0;

    friend bool operator==(const SharedSpec&, const SharedSpec&) = default;
};

/// A consumer's expectation about one export of a remote expose, written as
/// "remote/./Expose#Export" in the manifest's "expects" list.
struct Expectation {
    std::string consumer;
    std::string remote;
    std::string exposeId;
    std::string exportName;
    TypeExpr expected;

    std::string target() const { return remote + "/" + exposeId + "#" + exportName; }

    friend bool operator==(const Expectation&, const Expectation&) = default;
};

struct FederationManifest {
    std::string name;
    semver::Version version;
    std::optional<std::string> entry;
    std::vector<ModuleDecl> modules;
    std::vector<ExposeDecl> exposes;
    std::vector<RemoteRef> remotes;
    std::vector<SharedSpec> shared;
    std::vector<Expectation> expects;

    const ModuleDecl* find_module(std::string_view id) const noexcept;
    const ExposeDecl* find_expose(std::string_view id) const noexcept;
    const SharedSpec* find_shared(std::string_view package) const noexcept;
    bool is_exposed(std::string_view moduleId) const noexcept;

    friend bool operator==(const FederationManifest&, const FederationManifest&) = default;
};

struct ParsedManifest {
    FederationManifest manifest;
    std::vector<Diagnostic> warnings;  // W-UNKNOWN-FIELD, one per ignored field
};

/// Throws FedError E-SYNTAX, E-MISSING-FIELD, E-BAD-VERSION or E-BAD-RANGE.
ParsedManifest parse_manifest(std::string_view text);

/// Canonical JSON form; parse_manifest(serialize_manifest(m)).manifest == m.
std::string serialize_manifest(const FederationManifest& m);

/// All invariant violations; empty iff the manifest is valid.
std::vector<Diagnostic> validate_manifest(const FederationManifest& m);

struct ModuleKey {
    std::string application;
    std::string module;

    std::string str() const { return application + "/" + module; }

    friend auto operator<=>(const ModuleKey&, const ModuleKey&) = default;
};

struct Workspace {
    FederationManifest host;
    std::map<std::string, FederationManifest> remotes;
    /// Parsed interface files keyed by the module that declares them.
    std::map<ModuleKey, InterfaceDecl> interfaces;

    /// Host or remote by application name.
    const FederationManifest* find(std::string_view app) const noexcept;
    /// Host first, then remotes by name.
    std::vector<const FederationManifest*> applications() const;
};

struct LoadOptions {
    /// Link remote references back to the host instead of rejecting them as a
    /// cycle; each such link is reported as W-BIDIRECTIONAL.
    bool allowBidirectional = false;
};

struct LoadedWorkspace {
    Workspace workspace;
    /// Parse warnings and validation findings, paths prefixed by application.
    std::vector<Diagnostic> diagnostics;
};

/// Loads the host manifest and the transitive closure of its remotes.
/// Throws FedError E-IO, E-REMOTE-CYCLE, E-DUP-APP, E-REMOTE-NAME-MISMATCH,
/// or any parse error with the offending file in its path.
LoadedWorkspace load_workspace(const std::filesystem::path& hostPath, const LoadOptions& opts = {});

}  // namespace fedplan

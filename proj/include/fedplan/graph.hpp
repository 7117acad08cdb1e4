#pragma once

#include "fedplan/error.hpp"
#include "fedplan/manifest.hpp"
#include "fedplan/shares.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace fedplan {

enum class NodeKind { Entry, Exposed, Internal, SharedPkg };
enum class EdgeMode { Static, Dynamic };

std::string_view to_string(NodeKind k) noexcept;
std::string_view to_string(EdgeMode m) noexcept;

struct ModuleNode {
    ModuleKey key;
    std::int64_t sizeBytes = 0;
    NodeKind kind = NodeKind::Internal;

    friend bool operator==(const ModuleNode&, const ModuleNode&) = default;
};

struct Edge {
    ModuleKey from;
    ModuleKey to;
    EdgeMode mode = EdgeMode::Static;

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Cross-application module graph. Shared packages appear as one node per
/// bound version, keyed (provider, "pkg@version"), plus one per fallback
/// copy keyed by the application that loads it.
struct ModuleGraph {
    std::map<ModuleKey, ModuleNode> nodes;
    std::vector<Edge> edges;  // sorted, unique
    ModuleKey root;
    std::vector<Diagnostic> diagnostics;  // W-TRANSITIVE-REMOTE

    const ModuleNode& node(const ModuleKey& k) const { return nodes.at(k); }
    std::vector<Edge> out_edges(const ModuleKey& k) const;
    std::int64_t total_bytes(const std::set<ModuleKey>& keys) const;
};

/// Key of the node that shares `package` at `version`.
ModuleKey shared_key(const std::string& application, const std::string& package,
                     const semver::Version& version);

/// Throws FedError E-DANGLING-REMOTE, E-UNRESOLVED-SHARED, E-NO-ENTRY.
ModuleGraph build_graph(const Workspace& w, const ShareResolution& res);

std::set<ModuleKey> reachable_set(const ModuleGraph& g, bool includeDynamic);

/// Strongly connected components with more than one node or a self-loop.
/// Members are sorted; cycles are ordered by their smallest member.
std::vector<std::vector<ModuleKey>> detect_cycles(const ModuleGraph& g);

/// The graph with every strongly connected component contracted to one
/// fetch unit. Cycles that span applications have no load order and throw
/// FedError E-XAPP-CYCLE.
struct Condensation {
    std::vector<std::vector<ModuleKey>> units;  // sorted members; units[unit_of(root)] holds the root
    std::map<ModuleKey, std::size_t> unitOf;
    /// Unit-level edges. An edge is dynamic only if every module edge it
    /// summarizes is dynamic.
    std::map<std::pair<std::size_t, std::size_t>, EdgeMode> edges;

    std::vector<std::size_t> topological_order() const;
};

Condensation condense(const ModuleGraph& g);

/// Longest chain of sequential fetches from the root, counting each fetch
/// unit once.
std::size_t waterfall_depth(const ModuleGraph& g);

std::string export_dot(const ModuleGraph& g);
std::string graph_to_json(const ModuleGraph& g);

}  // namespace fedplan

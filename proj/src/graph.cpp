#include "fedplan/graph.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>

namespace fedplan {

std::string_view to_string(NodeKind k) noexcept {
    switch (k) {
        case NodeKind::Entry: return "entry";
        case NodeKind::Exposed: return "exposed";
        case NodeKind::Internal: return "internal";
        case NodeKind::SharedPkg: return "sharedPkg";
    }
    return "internal";
}

std::string_view to_string(EdgeMode m) noexcept { return m == EdgeMode::Static ? "static" : "dynamic"; }

std::vector<Edge> ModuleGraph::out_edges(const ModuleKey& k) const {
    auto lo = std::lower_bound(edges.begin(), edges.end(), k,
                               [](const Edge& e, const ModuleKey& key) { return e.from < key; });
    std::vector<Edge> out;
    for (auto it = lo; it != edges.end() && it->from == k; ++it) out.push_back(*it);
    return out;
}

std::int64_t ModuleGraph::total_bytes(const std::set<ModuleKey>& keys) const {
    std::int64_t sum = 0;
    for (const auto& k : keys) sum += nodes.at(k).sizeBytes;
    return sum;
}

ModuleKey shared_key(const std::string& application, const std::string& package,
                     const semver::Version& version) {
    return {application, package + "@" + version.str()};
}

ModuleGraph build_graph(const Workspace& w, const ShareResolution& res) {
    ModuleGraph g;
    if (!w.host.entry) throw FedError("E-NO-ENTRY", w.host.name + ".entry", "host declares no entry module");
    g.root = {w.host.name, *w.host.entry};

    for (const auto* app : w.applications()) {
        for (const auto& m : app->modules) {
            ModuleKey key{app->name, m.id};
            NodeKind kind = NodeKind::Internal;
            if (key == g.root) kind = NodeKind::Entry;
            else if (app->is_exposed(m.id)) kind = NodeKind::Exposed;
            else if (app->entry == m.id) kind = NodeKind::Entry;
            g.nodes.emplace(key, ModuleNode{key, m.sizeBytes, kind});
        }
    }
    if (!g.nodes.contains(g.root))
        throw FedError("E-NO-ENTRY", w.host.name + ".entry", "host entry is not a declared module");

    for (const auto& [pkg, b] : res.bindings) {
        auto key = shared_key(b.provider, pkg, b.version);
        g.nodes.emplace(key, ModuleNode{key, b.sizeBytes, NodeKind::SharedPkg});
    }
    std::map<std::pair<std::string, std::string>, ModuleKey> fallbackOf;
    for (const auto& f : res.fallbacks) {
        auto key = shared_key(f.application, f.package, f.ownVersion);
        g.nodes.emplace(key, ModuleNode{key, f.sizeBytes, NodeKind::SharedPkg});
        fallbackOf.emplace(std::pair{f.application, f.package}, key);
    }

    std::set<Edge> edges;
    for (const auto* app : w.applications()) {
        for (const auto& m : app->modules) {
            ModuleKey from{app->name, m.id};
            auto resolve = [&](const ImportRef& ref) -> ModuleKey {
                switch (ref.kind) {
                    case ImportRef::Kind::Local: return {app->name, ref.target};
                    case ImportRef::Kind::Remote: {
                        const FederationManifest* target = w.find(ref.remote);
                        const ExposeDecl* e = target ? target->find_expose(ref.target) : nullptr;
                        if (!e || !target->find_module(e->module))
                            throw FedError("E-DANGLING-REMOTE", from.str(),
                                           "no expose \"" + ref.target + "\" in remote \"" + ref.remote + "\"");
                        if (app != &w.host && ref.remote != w.host.name)
                            g.diagnostics.push_back(warning("W-TRANSITIVE-REMOTE", from.str(),
                                                            app->name + " imports " + ref.str() +
                                                                " from another remote"));
                        return {target->name, e->module};
                    }
                    case ImportRef::Kind::Shared: {
                        if (auto fb = fallbackOf.find({app->name, ref.target}); fb != fallbackOf.end())
                            return fb->second;
                        auto b = res.bindings.find(ref.target);
                        if (b == res.bindings.end())
                            throw FedError("E-UNRESOLVED-SHARED", from.str(),
                                           "shared package \"" + ref.target + "\" has no resolved version");
                        return shared_key(b->second.provider, ref.target, b->second.version);
                    }
                }
                return {};
            };
            for (const auto& r : m.staticImports) {
                auto to = resolve(r);
                if (!g.nodes.contains(to))
                    throw FedError("E-DANGLING-LOCAL", from.str(), "import of undeclared module " + to.str());
                edges.insert({from, to, EdgeMode::Static});
            }
            for (const auto& r : m.dynamicImports) {
                auto to = resolve(r);
                if (!g.nodes.contains(to))
                    throw FedError("E-DANGLING-LOCAL", from.str(), "import of undeclared module " + to.str());
                edges.insert({from, to, EdgeMode::Dynamic});
            }
        }
    }
    g.edges.assign(edges.begin(), edges.end());
    return g;
}

std::set<ModuleKey> reachable_set(const ModuleGraph& g, bool includeDynamic) {
    std::set<ModuleKey> seen{g.root};
    std::deque<ModuleKey> queue{g.root};
    while (!queue.empty()) {
        auto k = queue.front();
        queue.pop_front();
        for (const auto& e : g.out_edges(k)) {
            if (e.mode == EdgeMode::Dynamic && !includeDynamic) continue;
            if (seen.insert(e.to).second) queue.push_back(e.to);
        }
    }
    return seen;
}

namespace {

// Tarjan's algorithm; components come out with sorted members, in order of
// their smallest member.
std::vector<std::vector<ModuleKey>> strongly_connected(const ModuleGraph& g) {
    std::map<ModuleKey, int> index, low;
    std::set<ModuleKey> onStack;
    std::vector<ModuleKey> stack;
    std::vector<std::vector<ModuleKey>> out;
    int counter = 0;

    std::function<void(const ModuleKey&)> connect = [&](const ModuleKey& v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        onStack.insert(v);
        for (const auto& e : g.out_edges(v)) {
            if (!index.contains(e.to)) {
                connect(e.to);
                low[v] = std::min(low[v], low[e.to]);
            } else if (onStack.contains(e.to)) {
                low[v] = std::min(low[v], index[e.to]);
            }
        }
        if (low[v] == index[v]) {
            std::vector<ModuleKey> comp;
            ModuleKey w;
            do {
                w = stack.back();
                stack.pop_back();
                onStack.erase(w);
                comp.push_back(w);
            } while (w != v);
            std::sort(comp.begin(), comp.end());
            out.push_back(std::move(comp));
        }
    };
    for (const auto& [k, _] : g.nodes)
        if (!index.contains(k)) connect(k);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return out;
}

bool has_self_loop(const ModuleGraph& g, const ModuleKey& k) {
    auto out = g.out_edges(k);
    return std::any_of(out.begin(), out.end(), [&](const Edge& e) { return e.to == k; });
}

}  // namespace

std::vector<std::vector<ModuleKey>> detect_cycles(const ModuleGraph& g) {
    std::vector<std::vector<ModuleKey>> out;
    for (auto& comp : strongly_connected(g))
        if (comp.size() > 1 || has_self_loop(g, comp.front())) out.push_back(std::move(comp));
    return out;
}

Condensation condense(const ModuleGraph& g) {
    Condensation c;
    c.units = strongly_connected(g);
    for (std::size_t i = 0; i < c.units.size(); ++i) {
        const auto& unit = c.units[i];
        if (std::any_of(unit.begin(), unit.end(),
                        [&](const ModuleKey& k) { return k.application != unit.front().application; })) {
            std::string members;
            for (const auto& k : unit) members += (members.empty() ? "" : ", ") + k.str();
            throw FedError("E-XAPP-CYCLE", unit.front().str(), "import cycle spans applications: " + members);
        }
        for (const auto& k : unit) c.unitOf.emplace(k, i);
    }
    for (const auto& e : g.edges) {
        std::size_t a = c.unitOf.at(e.from), b = c.unitOf.at(e.to);
        if (a == b) continue;
        auto [it, inserted] = c.edges.emplace(std::pair{a, b}, e.mode);
        if (!inserted && e.mode == EdgeMode::Static) it->second = EdgeMode::Static;
    }
    return c;
}

std::vector<std::size_t> Condensation::topological_order() const {
    std::vector<std::size_t> indegree(units.size(), 0);
    std::vector<std::vector<std::size_t>> succ(units.size());
    for (const auto& [e, _] : edges) {
        succ[e.first].push_back(e.second);
        ++indegree[e.second];
    }
    std::vector<std::size_t> ready, order;
    for (std::size_t i = 0; i < units.size(); ++i)
        if (indegree[i] == 0) ready.push_back(i);
    while (!ready.empty()) {
        std::sort(ready.begin(), ready.end(), std::greater<>());
        std::size_t u = ready.back();
        ready.pop_back();
        order.push_back(u);
        for (auto v : succ[u])
            if (--indegree[v] == 0) ready.push_back(v);
    }
    return order;
}

std::size_t waterfall_depth(const ModuleGraph& g) {
    Condensation c = condense(g);
    std::size_t rootUnit = c.unitOf.at(g.root);
    std::vector<std::size_t> depth(c.units.size(), 0);  // 0 = not reached
    depth[rootUnit] = 1;
    std::size_t best = 1;
    for (auto u : c.topological_order()) {
        if (depth[u] == 0) continue;
        best = std::max(best, depth[u]);
        for (auto it = c.edges.lower_bound({u, 0}); it != c.edges.end() && it->first.first == u; ++it)
            depth[it->first.second] = std::max(depth[it->first.second], depth[u] + 1);
    }
    return best;
}

namespace {

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '\\';
        out += ch;
    }
    return out + "\"";
}

}  // namespace

std::string export_dot(const ModuleGraph& g) {
    std::ostringstream os;
    os << "digraph federation {\n";
    os << "  rankdir=LR;\n";
    for (const auto& [key, n] : g.nodes) {
        os << "  " << quoted(key.str()) << " [";
        switch (n.kind) {
            case NodeKind::SharedPkg: os << "shape=cylinder"; break;
            case NodeKind::Exposed: os << "shape=box, style=dashed"; break;
            default: os << "shape=box"; break;
        }
        if (key == g.root) os << ", peripheries=2";
        os << ", label=" << quoted(key.str() + "\\n" + std::to_string(n.sizeBytes) + " B") << "];\n";
    }
    for (const auto& e : g.edges) {
        os << "  " << quoted(e.from.str()) << " -> " << quoted(e.to.str());
        if (e.mode == EdgeMode::Dynamic) os << " [style=dashed]";
        os << ";\n";
    }
    os << "}\n";
    return os.str();
}

std::string graph_to_json(const ModuleGraph& g) {
    using ojson = nlohmann::ordered_json;
    ojson doc;
    doc["root"] = g.root.str();
    doc["nodes"] = ojson::array();
    for (const auto& [key, n] : g.nodes)
        doc["nodes"].push_back({{"key", key.str()},
                                {"application", key.application},
                                {"module", key.module},
                                {"kind", std::string(to_string(n.kind))},
                                {"sizeBytes", n.sizeBytes}});
    doc["edges"] = ojson::array();
    for (const auto& e : g.edges)
        doc["edges"].push_back(
            {{"from", e.from.str()}, {"to", e.to.str()}, {"mode", std::string(to_string(e.mode))}});
    return doc.dump(2) + "\n";
}

}  // namespace fedplan

#include "fedplan/planner.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <map>
#include <set>

namespace fedplan {

std::string_view to_string(LoadStrategy s) noexcept {
    switch (s) {
        case LoadStrategy::Lazy: return "lazy";
        case LoadStrategy::Prefetch: return "prefetch";
        case LoadStrategy::Eager: return "eager";
        case LoadStrategy::SSR: return "ssr";
    }
    return "lazy";
}

LoadStrategy parse_strategy(std::string_view text) {
    for (auto s : kAllStrategies)
        if (to_string(s) == text) return s;
    throw FedError("E-USAGE", "", "unknown strategy \"" + std::string(text) +
                                      "\" (expected lazy, prefetch, eager or ssr)");
}

namespace {

LoadPlan plan_lazy(const ModuleGraph& g, const std::set<ModuleKey>& reachable) {
    Condensation c;
    try {
        c = condense(g);
    } catch (const FedError& e) {
        throw FedError("E-CYCLIC", e.path(), e.detail());
    }

    LoadPlan p;
    std::map<std::size_t, std::size_t> requestOf;  // unit -> request id
    for (auto unit : c.topological_order()) {
        if (!reachable.contains(c.units[unit].front())) continue;
        FetchRequest r;
        r.id = p.requests.size();
        r.payload = c.units[unit];
        r.sizeBytes = g.total_bytes({r.payload.begin(), r.payload.end()});
        for (const auto& [edge, mode] : c.edges) {
            if (edge.second != unit || !requestOf.contains(edge.first)) continue;
            std::size_t dep = requestOf.at(edge.first);
            r.dependsOn.push_back(dep);
            if (mode == EdgeMode::Dynamic) r.dynamicDeps.push_back(dep);
        }
        std::sort(r.dependsOn.begin(), r.dependsOn.end());
        std::sort(r.dynamicDeps.begin(), r.dynamicDeps.end());
        if (r.dependsOn.empty()) {
            r.trigger = Trigger::Root;
        } else {
            r.trigger = Trigger::Parse;
            r.triggerNode = p.requests[r.dependsOn.front()].payload.front();
        }
        if (unit == c.unitOf.at(g.root)) p.rootRequest = r.id;
        requestOf.emplace(unit, r.id);
        p.requests.push_back(std::move(r));
    }
    return p;
}

LoadPlan plan_prefetch(const ModuleGraph& g, const std::set<ModuleKey>& reachable, const PlanOptions& opts) {
    const std::string& host = g.root.application;
    std::set<std::string> remotes;
    for (const auto& k : reachable)
        if (k.application != host) remotes.insert(k.application);

    LoadPlan p;
    if (!remotes.empty()) {
        FetchRequest m;
        m.manifests.assign(remotes.begin(), remotes.end());
        m.sizeBytes = opts.manifestBytes * static_cast<std::int64_t>(remotes.size());
        m.trigger = Trigger::Root;
        p.requests.push_back(std::move(m));
    }
    for (const auto& k : reachable) {
        FetchRequest r;
        r.id = p.requests.size();
        r.payload = {k};
        r.sizeBytes = g.node(k).sizeBytes;
        if (k.application == host) {
            r.trigger = Trigger::Root;
        } else {
            r.trigger = Trigger::Manifest;
            r.dependsOn = {0};
        }
        if (k == g.root) p.rootRequest = r.id;
        p.requests.push_back(std::move(r));
    }
    return p;
}

LoadPlan plan_eager(const ModuleGraph& g, const std::set<ModuleKey>& reachable) {
    std::map<std::string, std::set<ModuleKey>> payloads;
    std::map<ModuleKey, std::int64_t> copySize;
    std::set<ModuleKey> sharedNodes;
    for (const auto& k : reachable) {
        const auto& n = g.node(k);
        if (n.kind == NodeKind::SharedPkg) {
            sharedNodes.insert(k);
            continue;
        }
        payloads[k.application].insert(k);
        for (const auto& e : g.out_edges(k)) {
            const auto& target = g.node(e.to);
            if (target.kind != NodeKind::SharedPkg) continue;
            ModuleKey copy{k.application, e.to.module};
            payloads[k.application].insert(copy);
            copySize[copy] = target.sizeBytes;
        }
    }

    LoadPlan p;
    std::int64_t copies = 0;
    // host first, then the other applications by name
    std::vector<std::string> order{g.root.application};
    for (const auto& [app, _] : payloads)
        if (app != g.root.application) order.push_back(app);
    for (const auto& app : order) {
        auto it = payloads.find(app);
        if (it == payloads.end()) continue;
        FetchRequest r;
        r.id = p.requests.size();
        r.payload.assign(it->second.begin(), it->second.end());
        for (const auto& k : r.payload) {
            if (auto c = copySize.find(k); c != copySize.end()) {
                r.sizeBytes += c->second;
                copies += c->second;
            } else {
                r.sizeBytes += g.node(k).sizeBytes;
            }
        }
        r.trigger = Trigger::Root;
        if (app == g.root.application) p.rootRequest = r.id;
        p.requests.push_back(std::move(r));
    }
    p.duplicateBytes = copies - g.total_bytes(sharedNodes);
    return p;
}

LoadPlan plan_ssr(const ModuleGraph& g, const std::set<ModuleKey>& reachable) {
    LoadPlan p;
    FetchRequest r;
    r.payload.assign(reachable.begin(), reachable.end());
    r.sizeBytes = g.total_bytes(reachable);
    r.trigger = Trigger::Root;
    r.serverRendered = true;
    p.requests.push_back(std::move(r));
    p.rootRequest = 0;
    return p;
}

}  // namespace

LoadPlan plan(const ModuleGraph& g, const ShareResolution& res, LoadStrategy s, const PlanOptions& opts) {
    if (!g.nodes.contains(g.root))
        throw FedError("E-UNPLANNABLE", g.root.str(), "graph root is not a node");
    auto reachable = reachable_set(g, true);

    LoadPlan p;
    switch (s) {
        case LoadStrategy::Lazy: p = plan_lazy(g, reachable); break;
        case LoadStrategy::Prefetch: p = plan_prefetch(g, reachable, opts); break;
        case LoadStrategy::Eager: p = plan_eager(g, reachable); break;
        case LoadStrategy::SSR: p = plan_ssr(g, reachable); break;
    }
    p.strategy = s;
    p.duplicateBytes += res.duplicateBytes;

    std::set<ModuleKey> covered;
    for (const auto& r : p.requests) covered.insert(r.payload.begin(), r.payload.end());
    for (const auto& k : reachable) {
        bool copied = g.node(k).kind == NodeKind::SharedPkg && s == LoadStrategy::Eager;
        if (!copied && !covered.contains(k))
            throw FedError("E-UNPLANNABLE", k.str(), "required module is not fetched by any request");
    }
    return p;
}

std::int64_t required_bytes(const LoadPlan& p) {
    std::int64_t sum = 0;
    for (const auto& r : p.requests) sum += r.sizeBytes;
    return sum;
}

std::size_t longest_chain(const LoadPlan& p) {
    std::vector<std::size_t> chain(p.requests.size(), 1);
    std::size_t best = 0;
    for (const auto& r : p.requests) {
        for (auto d : r.dependsOn) chain[r.id] = std::max(chain[r.id], chain[d] + 1);
        best = std::max(best, chain[r.id]);
    }
    return best;
}

std::string plan_to_json(const LoadPlan& p) {
    using ojson = nlohmann::ordered_json;
    ojson doc;
    doc["strategy"] = std::string(to_string(p.strategy));
    doc["requests"] = ojson::array();
    for (const auto& r : p.requests) {
        ojson j;
        j["id"] = r.id;
        j["payload"] = ojson::array();
        for (const auto& k : r.payload) j["payload"].push_back(k.str());
        if (!r.manifests.empty()) j["manifests"] = r.manifests;
        j["sizeBytes"] = r.sizeBytes;
        j["dependsOn"] = r.dependsOn;
        if (!r.dynamicDeps.empty()) j["dynamicDependsOn"] = r.dynamicDeps;
        switch (r.trigger) {
            case Trigger::Root: j["trigger"] = "root"; break;
            case Trigger::Manifest: j["trigger"] = "manifest"; break;
            case Trigger::Parse: j["trigger"] = "parse:" + r.triggerNode->str(); break;
        }
        if (r.serverRendered) j["serverRendered"] = true;
        doc["requests"].push_back(std::move(j));
    }
    doc["requiredBytes"] = required_bytes(p);
    doc["duplicateBytes"] = p.duplicateBytes;
    doc["longestChain"] = longest_chain(p);
    return doc.dump(2) + "\n";
}

}  // namespace fedplan

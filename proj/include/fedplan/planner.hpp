#pragma once

#include "fedplan/graph.hpp"
#include "fedplan/shares.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fedplan {

enum class LoadStrategy { Lazy, Prefetch, Eager, SSR };

inline constexpr LoadStrategy kAllStrategies[] = {LoadStrategy::Lazy, LoadStrategy::Prefetch,
                                                  LoadStrategy::Eager, LoadStrategy::SSR};

std::string_view to_string(LoadStrategy s) noexcept;
/// Accepts "lazy", "prefetch", "eager", "ssr". Throws FedError E-USAGE.
LoadStrategy parse_strategy(std::string_view text);

enum class Trigger { Root, Parse, Manifest };

struct FetchRequest {
    std::size_t id = 0;
    std::vector<ModuleKey> payload;       // sorted; may hold private shared copies under Eager
    std::vector<std::string> manifests;   // remote manifests carried (Prefetch request 0)
    std::int64_t sizeBytes = 0;
    std::vector<std::size_t> dependsOn;   // sorted request ids
    /// Subset of dependsOn reached through a dynamic import; these fire an
    /// interaction delay after the importer is parsed.
    std::vector<std::size_t> dynamicDeps;
    Trigger trigger = Trigger::Root;
    std::optional<ModuleKey> triggerNode;  // the importer for Trigger::Parse
    bool serverRendered = false;           // SSR payload: composed on the server, hydrated on arrival

    friend bool operator==(const FetchRequest&, const FetchRequest&) = default;
};

struct LoadPlan {
    LoadStrategy strategy = LoadStrategy::Lazy;
    std::vector<FetchRequest> requests;  // ids equal positions; dependencies point backwards
    std::optional<std::size_t> rootRequest;
    std::int64_t duplicateBytes = 0;

    friend bool operator==(const LoadPlan&, const LoadPlan&) = default;
};

struct PlanOptions {
    std::int64_t manifestBytes = 2000;  // per remote manifest fetched by Prefetch
};

/// Throws FedError E-CYCLIC or E-UNPLANNABLE.
LoadPlan plan(const ModuleGraph& g, const ShareResolution& res, LoadStrategy s, const PlanOptions& opts = {});

std::int64_t required_bytes(const LoadPlan& p);

/// Number of requests on the longest dependsOn chain.
std::size_t longest_chain(const LoadPlan& p);

std::string plan_to_json(const LoadPlan& p);

}  // namespace fedplan

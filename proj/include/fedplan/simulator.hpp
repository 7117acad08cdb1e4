#pragma once

#include "fedplan/graph.hpp"
#include "fedplan/planner.hpp"
#include "fedplan/shares.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fedplan {

struct NetworkModel {
    double rttMs = 100.0;
    double bandwidthBytesPerMs = 100.0;  // shared equally by in-flight transfers
    std::size_t maxConcurrent = 6;
    double parseMsPerKb = 0.0;           // per 1000 bytes
    double serverComposeMs = 0.0;
    double hydrationFactor = 1.0;        // parse multiplier for server-rendered payloads
    double interactionDelayMs = 0.0;     // dynamic imports fire this long after the importer parses

    /// Throws FedError E-BAD-NET.
    void validate() const;

    friend bool operator==(const NetworkModel&, const NetworkModel&) = default;
};

/// Reads net.json; every field is required. Throws FedError E-SYNTAX,
/// E-MISSING-FIELD or E-BAD-NET.
NetworkModel parse_network(std::string_view text);

struct RequestTiming {
    std::size_t requestId = 0;
    double startMs = 0;    // slot acquired
    double headersMs = 0;  // latency (and server composition) over, transfer begins
    double doneMs = 0;     // last byte received
    double parseDoneMs = 0;
    std::int64_t bytes = 0;
};

struct SimReport {
    LoadStrategy strategy = LoadStrategy::Lazy;
    double timeToFirstRenderMs = 0;
    double timeToInteractiveMs = 0;
    std::int64_t totalBytes = 0;
    std::size_t requestCount = 0;
    std::size_t maxObservedConcurrency = 0;
    std::size_t waterfallRounds = 0;
    std::vector<RequestTiming> timeline;  // ordered by request id
};

/// Event-driven processor-sharing simulation of a plan. Deterministic.
/// Throws FedError E-DEADLOCK when dependencies can never be met.
SimReport simulate(const LoadPlan& p, const NetworkModel& net);

/// Plans and simulates each strategy over the same inputs, in the given order.
std::vector<SimReport> compare_strategies(const ModuleGraph& g, const ShareResolution& res,
                                          const NetworkModel& net, std::span<const LoadStrategy> strategies,
                                          const PlanOptions& opts = {});

std::string report_to_json(const SimReport& r);
std::string reports_to_json(std::span<const SimReport> reports);
std::string reports_to_table(std::span<const SimReport> reports);

}  // namespace fedplan

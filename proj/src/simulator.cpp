#include "fedplan/simulator.hpp"

#include "json_util.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdio>
#include <future>
#include <limits>
#include <set>
#include <sstream>

namespace fedplan {

void NetworkModel::validate() const {
    auto bad = [](const char* field, const char* why) {
        throw FedError("E-BAD-NET", std::string(".") + field, why);
    };
    if (!(rttMs >= 0)) bad("rttMs", "must be >= 0");
    if (!(bandwidthBytesPerMs > 0)) bad("bandwidthBytesPerMs", "must be > 0");
    if (maxConcurrent < 1) bad("maxConcurrent", "must be >= 1");
    if (!(parseMsPerKb >= 0)) bad("parseMsPerKb", "must be >= 0");
    if (!(serverComposeMs >= 0)) bad("serverComposeMs", "must be >= 0");
    if (!(hydrationFactor >= 0)) bad("hydrationFactor", "must be >= 0");
    if (!(interactionDelayMs >= 0)) bad("interactionDelayMs", "must be >= 0");
}

NetworkModel parse_network(std::string_view text) {
    auto doc = detail::parse_json(text, "");
    detail::expect_object(doc, ".");
    NetworkModel n;
    n.rttMs = detail::get_number(doc, "rttMs", "");
    n.bandwidthBytesPerMs = detail::get_number(doc, "bandwidthBytesPerMs", "");
    std::int64_t conc = detail::get_int(doc, "maxConcurrent", "");
    if (conc < 1) throw FedError("E-BAD-NET", ".maxConcurrent", "must be >= 1");
    n.maxConcurrent = static_cast<std::size_t>(conc);
    n.parseMsPerKb = detail::get_number(doc, "parseMsPerKb", "");
    n.serverComposeMs = detail::get_number(doc, "serverComposeMs", "");
    n.hydrationFactor = detail::get_number(doc, "hydrationFactor", "");
    n.interactionDelayMs = detail::get_number(doc, "interactionDelayMs", "");
    n.validate();
    return n;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Phase { Blocked, Pending, Latency, Transfer, Done };

struct State {
    Phase phase = Phase::Blocked;
    std::size_t unmetDeps = 0;
    double eligibleMs = 0;
    double remaining = 0;
};

class Engine {
public:
    Engine(const LoadPlan& p, const NetworkModel& net) : _plan(p), _net(net) {
        const auto n = p.requests.size();
        _state.resize(n);
        _timing.resize(n);
        _dependents.resize(n);
        for (const auto& r : p.requests) {
            if (r.id >= n) throw FedError("E-DEADLOCK", "", "request id out of range");
            for (auto d : r.dependsOn) {
                if (d >= n) throw FedError("E-DEADLOCK", "", "dependency on unknown request");
                _dependents[d].push_back(r.id);
            }
            _state[r.id].unmetDeps = r.dependsOn.size();
            _timing[r.id].requestId = r.id;
            _timing[r.id].bytes = r.sizeBytes;
            if (r.dependsOn.empty()) make_pending(r.id, 0.0);
        }
    }

    void run() {
        double now = 0.0;
        while (_finished < _state.size()) {
            settle(now);
            if (_finished == _state.size()) break;
            double next = next_event(now);
            if (next == kInf) throw FedError("E-DEADLOCK", "", "requests wait on dependencies that never complete");
            advance(now, next);
            now = next;
        }
    }

    const std::vector<RequestTiming>& timeline() const { return _timing; }
    std::size_t max_concurrency() const { return _maxInFlight; }

private:
    void make_pending(std::size_t id, double eligible) {
        _state[id].phase = Phase::Pending;
        _state[id].eligibleMs = eligible;
        _pending.insert({eligible, id});
    }

    // Processes every event due at `now` until nothing else changes.
    void settle(double now) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t id = 0; id < _state.size(); ++id) {
                auto& s = _state[id];
                if (s.phase == Phase::Latency && _timing[id].headersMs <= now) {
                    s.phase = Phase::Transfer;
                    s.remaining = static_cast<double>(_plan.requests[id].sizeBytes);
                    changed = true;
                }
                if (s.phase == Phase::Transfer && s.remaining <= 0) {
                    complete(id, now);
                    changed = true;
                }
            }
            while (_inFlight < _net.maxConcurrent && !_pending.empty() && _pending.begin()->first <= now) {
                std::size_t id = _pending.begin()->second;
                _pending.erase(_pending.begin());
                start(id, now);
                changed = true;
            }
        }
    }

    void start(std::size_t id, double now) {
        const auto& r = _plan.requests[id];
        auto& t = _timing[id];
        t.startMs = now;
        t.headersMs = now + _net.rttMs + (r.serverRendered ? _net.serverComposeMs : 0.0);
        _state[id].phase = Phase::Latency;
        ++_inFlight;
        _maxInFlight = std::max(_maxInFlight, _inFlight);
    }

    void complete(std::size_t id, double now) {
        const auto& r = _plan.requests[id];
        auto& t = _timing[id];
        _state[id].phase = Phase::Done;
        _state[id].remaining = 0;
        --_inFlight;
        ++_finished;
        t.doneMs = now;
        double parse = static_cast<double>(r.sizeBytes) / 1000.0 * _net.parseMsPerKb;
        if (r.serverRendered) parse *= _net.hydrationFactor;
        t.parseDoneMs = now + parse;

        for (auto dep : _dependents[id]) {
            auto& s = _state[dep];
            if (--s.unmetDeps > 0) continue;
            const auto& d = _plan.requests[dep];
            double eligible = 0.0;
            for (auto p : d.dependsOn) {
                bool dynamic = std::binary_search(d.dynamicDeps.begin(), d.dynamicDeps.end(), p);
                eligible = std::max(eligible, _timing[p].parseDoneMs + (dynamic ? _net.interactionDelayMs : 0.0));
            }
            make_pending(dep, eligible);
        }
    }

    std::size_t transferring() const {
        return static_cast<std::size_t>(std::count_if(_state.begin(), _state.end(),
                                                      [](const State& s) { return s.phase == Phase::Transfer; }));
    }

    double next_event(double now) const {
        double next = kInf;
        if (_inFlight < _net.maxConcurrent && !_pending.empty())
            next = std::min(next, std::max(now, _pending.begin()->first));
        std::size_t active = transferring();
        for (std::size_t id = 0; id < _state.size(); ++id) {
            const auto& s = _state[id];
            if (s.phase == Phase::Latency) next = std::min(next, _timing[id].headersMs);
            if (s.phase == Phase::Transfer)
                next = std::min(next, now + s.remaining * static_cast<double>(active) / _net.bandwidthBytesPerMs);
        }
        return next;
    }

    // Moves bytes for the interval [now, next). Transfers whose finish time
    // is `next` are zeroed exactly.
    void advance(double now, double next) {
        std::size_t active = transferring();
        if (active == 0) return;
        double rate = _net.bandwidthBytesPerMs / static_cast<double>(active);
        for (std::size_t id = 0; id < _state.size(); ++id) {
            auto& s = _state[id];
            if (s.phase != Phase::Transfer) continue;
            if (now + s.remaining * static_cast<double>(active) / _net.bandwidthBytesPerMs <= next)
                s.remaining = 0;
            else
                s.remaining -= (next - now) * rate;
        }
    }

    const LoadPlan& _plan;
    const NetworkModel& _net;
    std::vector<State> _state;
    std::vector<RequestTiming> _timing;
    std::vector<std::vector<std::size_t>> _dependents;
    std::set<std::pair<double, std::size_t>> _pending;  // FIFO by (eligible time, id)
    std::size_t _inFlight = 0;
    std::size_t _maxInFlight = 0;
    std::size_t _finished = 0;
};

}  // namespace

SimReport simulate(const LoadPlan& p, const NetworkModel& net) {
    net.validate();
    Engine engine(p, net);
    engine.run();

    SimReport r;
    r.strategy = p.strategy;
    r.timeline = engine.timeline();
    r.totalBytes = required_bytes(p);
    r.requestCount = p.requests.size();
    r.maxObservedConcurrency = engine.max_concurrency();
    r.waterfallRounds = longest_chain(p);
    for (const auto& t : r.timeline) r.timeToInteractiveMs = std::max(r.timeToInteractiveMs, t.parseDoneMs);
    if (p.rootRequest) r.timeToFirstRenderMs = r.timeline[*p.rootRequest].parseDoneMs;
    return r;
}

std::vector<SimReport> compare_strategies(const ModuleGraph& g, const ShareResolution& res,
                                          const NetworkModel& net, std::span<const LoadStrategy> strategies,
                                          const PlanOptions& opts) {
    std::vector<std::future<SimReport>> runs;
    for (auto s : strategies)
        runs.push_back(std::async(std::launch::async, [&, s] { return simulate(plan(g, res, s, opts), net); }));
    std::vector<SimReport> out;
    for (auto& f : runs) out.push_back(f.get());
    return out;
}

namespace {

nlohmann::ordered_json report_json(const SimReport& r) {
    nlohmann::ordered_json j;
    j["strategy"] = std::string(to_string(r.strategy));
    j["timeToFirstRenderMs"] = r.timeToFirstRenderMs;
    j["timeToInteractiveMs"] = r.timeToInteractiveMs;
    j["totalBytes"] = r.totalBytes;
    j["requestCount"] = r.requestCount;
    j["maxObservedConcurrency"] = r.maxObservedConcurrency;
    j["waterfallRounds"] = r.waterfallRounds;
    j["timeline"] = nlohmann::ordered_json::array();
    for (const auto& t : r.timeline)
        j["timeline"].push_back({{"requestId", t.requestId},
                                 {"startMs", t.startMs},
                                 {"headersMs", t.headersMs},
                                 {"doneMs", t.doneMs},
                                 {"parseDoneMs", t.parseDoneMs},
                                 {"bytes", t.bytes}});
    return j;
}

}  // namespace

std::string report_to_json(const SimReport& r) { return report_json(r).dump(2) + "\n"; }

std::string reports_to_json(std::span<const SimReport> reports) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : reports) arr.push_back(report_json(r));
    return arr.dump(2) + "\n";
}

std::string reports_to_table(std::span<const SimReport> reports) {
    std::ostringstream os;
    char line[160];
    std::snprintf(line, sizeof line, "%-10s %12s %12s %12s %9s %8s %9s\n", "strategy", "ttfr_ms", "tti_ms",
                  "bytes", "requests", "rounds", "max_conc");
    os << line;
    for (const auto& r : reports) {
        std::snprintf(line, sizeof line, "%-10s %12.3f %12.3f %12lld %9zu %8zu %9zu\n",
                      std::string(to_string(r.strategy)).c_str(), r.timeToFirstRenderMs, r.timeToInteractiveMs,
                      static_cast<long long>(r.totalBytes), r.requestCount, r.waterfallRounds,
                      r.maxObservedConcurrency);
        os << line;
    }
    return os.str();
}

}  // namespace fedplan

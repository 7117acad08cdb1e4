#include "fedplan/simulator.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <nlohmann/json.hpp>

#include <array>
#include <cmath>

using namespace fedplan;

namespace {

LoadPlan single(std::int64_t bytes) {
    LoadPlan p;
    FetchRequest r;
    r.payload = {{"h", "entry"}};
    r.sizeBytes = bytes;
    p.requests.push_back(r);
    p.rootRequest = 0;
    return p;
}

void check_against_oracle(const LoadPlan& p, const NetworkModel& net, double tol) {
    auto report = simulate(p, net);
    auto fluid = oracle::fluid_simulate(p, net);
    REQUIRE(fluid.size() == report.timeline.size());
    for (std::size_t i = 0; i < fluid.size(); ++i) {
        CHECK(std::abs(report.timeline[i].startMs - fluid[i].startMs) < tol);
        CHECK(std::abs(report.timeline[i].doneMs - fluid[i].doneMs) < tol);
        CHECK(std::abs(report.timeline[i].parseDoneMs - fluid[i].parseDoneMs) < tol);
    }
}

}  // namespace

TEST_CASE("network model parsing") {
    auto net = parse_network(fixtures::read(fixtures::path("nets/fig1.json")));
    CHECK(net == NetworkModel{});
    CHECK_THROWS_AS(parse_network(fixtures::read(fixtures::path("nets/malformed.json"))), FedError);
    try {
        parse_network(R"({"rttMs": 1})");
        FAIL("expected E-MISSING-FIELD");
    } catch (const FedError& e) {
        CHECK(e.code() == "E-MISSING-FIELD");
    }
    try {
        parse_network(R"({"rttMs": -1, "bandwidthBytesPerMs": 1, "maxConcurrent": 1, "parseMsPerKb": 0,
                          "serverComposeMs": 0, "hydrationFactor": 1, "interactionDelayMs": 0})");
        FAIL("expected E-BAD-NET");
    } catch (const FedError& e) {
        CHECK(e.code() == "E-BAD-NET");
    }
}

TEST_CASE("single request closed form") {
    auto r = simulate(single(10000), NetworkModel{});
    REQUIRE(r.timeline.size() == 1);
    CHECK(r.timeline[0].startMs == 0);
    CHECK(r.timeline[0].headersMs == 100);
    CHECK(r.timeline[0].doneMs == 200);
    CHECK(r.timeToFirstRenderMs == 200);
    CHECK(r.timeToInteractiveMs == 200);

    NetworkModel slow;
    slow.parseMsPerKb = 2;
    CHECK(simulate(single(10000), slow).timeToInteractiveMs == 220);
}

TEST_CASE("empty plan") {
    auto r = simulate(LoadPlan{}, NetworkModel{});
    CHECK(r.requestCount == 0);
    CHECK(r.timeToInteractiveMs == 0);
}

TEST_CASE("Fig. 1 lazy waterfall") {
    auto a = fixtures::analyze_fixture("fig1");
    auto r = simulate(plan(a.graph, a.resolution, LoadStrategy::Lazy), NetworkModel{});
    // three sequential rounds of rtt + bytes / bandwidth
    double closed = 3 * (100.0 + 10000.0 / 100.0);
    CHECK(r.timeToInteractiveMs == closed);
    CHECK(r.timeToFirstRenderMs == 200);
    CHECK(r.waterfallRounds == 3);
}

TEST_CASE("Fig. 1 prefetch agrees with the fluid integrator") {
    auto a = fixtures::analyze_fixture("fig1");
    auto p = plan(a.graph, a.resolution, LoadStrategy::Prefetch);
    auto fluid = oracle::fluid_simulate(p, NetworkModel{});
    double fluidTti = 0;
    for (const auto& t : fluid) fluidTti = std::max(fluidTti, t.parseDoneMs);
    auto r = simulate(p, NetworkModel{});
    CHECK(std::abs(r.timeToInteractiveMs - fluidTti) < 0.01);
    CHECK(std::abs(fluidTti - 440.0) < 0.01);
    check_against_oracle(p, NetworkModel{}, 0.01);
}

TEST_CASE("event engine matches the fluid integrator on generated plans") {
    gen::Rng rng(29);
    NetworkModel net;
    net.maxConcurrent = 3;
    net.parseMsPerKb = 1.5;
    net.interactionDelayMs = 25;
    net.serverComposeMs = 40;
    net.hydrationFactor = 2;
    for (int i = 0; i < 12; ++i) {
        auto a = fixtures::analyze(gen::workspace(rng, 10));
        for (auto s : kAllStrategies) check_against_oracle(plan(a.graph, a.resolution, s), net, 0.05);
    }
}

TEST_CASE("SSR timing") {
    NetworkModel net;
    net.serverComposeMs = 50;
    net.parseMsPerKb = 1;
    net.hydrationFactor = 3;
    auto a = fixtures::analyze_fixture("fig1");
    auto r = simulate(plan(a.graph, a.resolution, LoadStrategy::SSR), net);
    // rtt + compose + 30000 B transfer + 30 KB parse x hydration
    CHECK(r.timeToInteractiveMs == doctest::Approx(100 + 50 + 300 + 90));
    CHECK(r.timeToFirstRenderMs == r.timeToInteractiveMs);
}

TEST_CASE("concurrency cap queues FIFO") {
    LoadPlan p;
    for (std::size_t i = 0; i < 4; ++i) {
        FetchRequest r;
        r.id = i;
        r.payload = {{"h", "m" + std::to_string(i)}};
        r.sizeBytes = 1000;
        p.requests.push_back(r);
    }
    p.rootRequest = 0;
    NetworkModel net;
    net.maxConcurrent = 2;
    auto rep = simulate(p, net);
    CHECK(rep.maxObservedConcurrency == 2);
    CHECK(rep.timeline[2].startMs == rep.timeline[0].doneMs);
    CHECK(rep.timeline[3].startMs == rep.timeline[1].doneMs);
}

TEST_CASE("deadlock") {
    LoadPlan p = single(10);
    p.requests[0].dependsOn = {0};
    CHECK_THROWS_AS(simulate(p, NetworkModel{}), FedError);
}

TEST_CASE("strategy comparison on fixtures") {
    NetworkModel net;
    for (const auto& name : fixtures::plannable()) {
        auto a = fixtures::analyze_fixture(name);
        auto reports = compare_strategies(a.graph, a.resolution, net, kAllStrategies);
        REQUIRE(reports.size() == 4);
        CHECK(reports[1].timeToInteractiveMs <= reports[0].timeToInteractiveMs);
        CHECK(reports[2].totalBytes >= reports[0].totalBytes);
        CHECK(reports_to_json(reports) ==
              reports_to_json(compare_strategies(a.graph, a.resolution, net, kAllStrategies)));
    }
    auto fig2 = fixtures::analyze_fixture("fig2");
    auto reports = compare_strategies(fig2.graph, fig2.resolution, net, kAllStrategies);
    CHECK(reports[2].totalBytes > reports[0].totalBytes);
}

TEST_CASE("single-module graph: strategies agree up to SSR costs") {
    Workspace w;
    w.host.name = "h";
    w.host.entry = "entry";
    w.host.modules.push_back({"entry", 5000, {}, {}, {}});
    auto a = fixtures::analyze(w);
    NetworkModel net;
    net.parseMsPerKb = 1;
    auto reports = compare_strategies(a.graph, a.resolution, net, kAllStrategies);
    for (std::size_t i = 0; i < 3; ++i) CHECK(reports[i].timeToInteractiveMs == 100 + 50 + 5);
    CHECK(reports[3].timeToInteractiveMs == 100 + 50 + 5);
    net.serverComposeMs = 30;
    net.hydrationFactor = 2;
    auto ssr = compare_strategies(a.graph, a.resolution, net, std::array{LoadStrategy::SSR});
    CHECK(ssr[0].timeToInteractiveMs == 100 + 30 + 50 + 10);
}

TEST_CASE("simulator laws on generated graphs") {
    gen::Rng rng(41);
    NetworkModel net;
    net.maxConcurrent = 4;
    net.parseMsPerKb = 0.5;
    net.interactionDelayMs = 10;
    for (int i = 0; i < 50; ++i) {
        auto a = fixtures::analyze(gen::workspace(rng));
        for (auto s : kAllStrategies) {
            auto p = plan(a.graph, a.resolution, s);
            auto r = simulate(p, net);
            // every byte crosses the link while it is busy
            CHECK(std::abs(oracle::busy_link_bytes(r.timeline, net.bandwidthBytesPerMs) -
                           static_cast<double>(required_bytes(p))) < 1e-6 * std::max<double>(1, required_bytes(p)));
            CHECK(r.totalBytes == required_bytes(p));
            for (const auto& t : r.timeline) {
                for (auto d : p.requests[t.requestId].dependsOn) CHECK(t.startMs >= r.timeline[d].parseDoneMs);
                CHECK(t.headersMs >= t.startMs + net.rttMs);
                CHECK(t.doneMs >= t.headersMs);
                CHECK(t.parseDoneMs >= t.doneMs);
            }
            CHECK(r.maxObservedConcurrency <= net.maxConcurrent);
        }
    }
}

TEST_CASE("lazy chain closed form") {
    gen::Rng rng(43);
    NetworkModel net;
    net.parseMsPerKb = 0.7;
    net.interactionDelayMs = 13;
    for (int i = 0; i < 50; ++i) {
        auto a = fixtures::analyze(gen::chain(rng, 1 + i % 12, true));
        auto p = plan(a.graph, a.resolution, LoadStrategy::Lazy);
        double expected = 0;
        for (const auto& r : p.requests) {
            double bytes = static_cast<double>(r.sizeBytes);
            expected += net.rttMs + bytes / net.bandwidthBytesPerMs + bytes / 1000.0 * net.parseMsPerKb;
            if (!r.dynamicDeps.empty()) expected += net.interactionDelayMs;
        }
        CHECK(std::abs(simulate(p, net).timeToInteractiveMs - expected) < 1e-9);
    }
}

TEST_CASE("report JSON and table") {
    auto a = fixtures::analyze_fixture("fig1");
    auto r = simulate(plan(a.graph, a.resolution, LoadStrategy::Lazy), NetworkModel{});
    auto j = nlohmann::json::parse(report_to_json(r));
    CHECK(j["strategy"] == "lazy");
    CHECK(j["timeToInteractiveMs"] == 600.0);
    CHECK(j["timeline"].size() == 3);
    auto table = reports_to_table(std::span<const SimReport>(&r, 1));
    CHECK(table.find("lazy") != std::string::npos);
}

TEST_CASE("rtt sweep over fixtures") {
    const double rtts[] = {50, 100, 200};
    for (const auto& name : fixtures::plannable()) {
        auto a = fixtures::analyze_fixture(name);
        for (auto s : kAllStrategies) {
            auto p = plan(a.graph, a.resolution, s);
            std::vector<SimReport> sweep;
            for (double rtt : rtts) {
                NetworkModel net;
                net.rttMs = rtt;
                sweep.push_back(simulate(p, net));
            }
            CAPTURE(name);
            CAPTURE(to_string(s));
            for (std::size_t k = 1; k < sweep.size(); ++k)
                CHECK(sweep[k].timeToInteractiveMs >= sweep[k - 1].timeToInteractiveMs);
        }
    }
}

TEST_CASE("prefetch first render can get earlier as rtt grows") {
    auto a = fixtures::analyze_fixture("fig1");
    auto p = plan(a.graph, a.resolution, LoadStrategy::Prefetch);
    NetworkModel fast;
    fast.rttMs = 50;
    // rtt 50: entry and manifest share the link from 50, the manifest is done
    // at 90, the entry runs alone until 140 with 3000 B left, then shares
    // with the two remote modules at 100/3 B/ms: done at 230.
    CHECK(simulate(p, fast).timeToFirstRenderMs == doctest::Approx(230));
    // rtt 100: the remote modules only start transferring at 240, after the
    // entry finished at 220.
    CHECK(simulate(p, NetworkModel{}).timeToFirstRenderMs == doctest::Approx(220));
    auto fluid = oracle::fluid_simulate(p, fast);
    CHECK(std::abs(fluid[*p.rootRequest].parseDoneMs - 230) < 0.01);
}

#include "fedplan/trace.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

#include <doctest.h>

#include <algorithm>

using namespace fedplan;

namespace {

std::vector<std::string> codes(const std::vector<Diagnostic>& d) {
    std::vector<std::string> out;
    for (const auto& x : d) out.push_back(x.code);
    return out;
}

SimReport run(const std::string& fixture, LoadStrategy s) {
    auto a = fixtures::analyze_fixture(fixture);
    return simulate(plan(a.graph, a.resolution, s), NetworkModel{});
}

}  // namespace

TEST_CASE("record nests and checks containment") {
    TraceLog log("t");
    auto root = log.record("analysis", std::nullopt, 0, 500);
    auto child = log.record("resolve.shares", root, 10, 40);
    CHECK(log.spans().size() == 2);
    CHECK(root == 1);
    CHECK(child == 2);
    CHECK(log.find(child)->parentSpanId == root);

    try {
        log.record("late", root, 10, 600);
        FAIL("expected E-BAD-INTERVAL");
    } catch (const FedError& e) {
        CHECK(e.code() == "E-BAD-INTERVAL");
    }
    try {
        log.record("orphan", SpanId{99}, 10, 20);
        FAIL("expected E-NO-PARENT");
    } catch (const FedError& e) {
        CHECK(e.code() == "E-NO-PARENT");
    }
    CHECK(log.spans().size() == 2);
}

TEST_CASE("from_sim on a single request") {
    LoadPlan p;
    FetchRequest r;
    r.payload = {{"h", "entry"}};
    r.sizeBytes = 10000;
    p.requests.push_back(r);
    p.rootRequest = 0;
    auto log = from_sim(simulate(p, NetworkModel{}));
    REQUIRE(log.spans().size() == 3);
    const auto& fetch = log.spans()[1];
    const auto& parse = log.spans()[2];
    CHECK(fetch.name == "fetch.request");
    CHECK(fetch.startMs == 0);
    CHECK(fetch.endMs == 200);
    CHECK(std::get<std::string>(fetch.attributes.at("headersMs")) == "100");
    CHECK(parse.startMs == 200);
    CHECK(parse.endMs == 200);
    CHECK(validate_trace(log).empty());
}

TEST_CASE("lazy chain trace") {
    auto log = from_sim(run("fig1", LoadStrategy::Lazy));
    CHECK(log.trace_id() == "fedplan-lazy");
    CHECK(log.spans().size() == 7);
    CHECK(validate_trace(log).empty());
    std::vector<const Span*> fetches;
    for (const auto& s : log.spans())
        if (s.name == "fetch.request") fetches.push_back(&s);
    REQUIRE(fetches.size() == 3);
    for (std::size_t i = 0; i < fetches.size(); ++i)
        for (std::size_t j = i + 1; j < fetches.size(); ++j)
            CHECK((fetches[i]->endMs <= fetches[j]->startMs || fetches[j]->endMs <= fetches[i]->startMs));
}

TEST_CASE("empty plan trace") {
    auto log = from_sim(simulate(LoadPlan{}, NetworkModel{}));
    REQUIRE(log.spans().size() == 1);
    CHECK(log.spans()[0].startMs == log.spans()[0].endMs);
    CHECK(validate_trace(log).empty());
}

TEST_CASE("validate_trace findings") {
    TraceLog two("t");
    two.record("a", std::nullopt, 0, 1);
    two.record("b", std::nullopt, 0, 1);
    CHECK(codes(validate_trace(two)) == std::vector<std::string>{"E-MULTIROOT"});

    TraceLog siblings("t");
    auto root = siblings.record("root", std::nullopt, 0, 100);
    siblings.record("x", root, 0, 60);
    siblings.record("y", root, 40, 100);
    CHECK(validate_trace(siblings).empty());

    TraceLog broken("t");
    broken.append_unchecked({"t", 1, std::nullopt, "root", 0, 10, {}});
    broken.append_unchecked({"t", 1, 1, "dup", 0, 5, {}});
    broken.append_unchecked({"other", 3, 1, "foreign", 0, 5, {}});
    broken.append_unchecked({"t", 4, 1, "backwards", 5, 0, {}});
    broken.append_unchecked({"t", 5, 42, "orphan", 0, 5, {}});
    auto c = codes(validate_trace(broken));
    for (const char* code : {"E-DUP-SPAN", "E-TRACE-ID", "E-BAD-INTERVAL", "E-NO-PARENT"})
        CHECK(std::count(c.begin(), c.end(), code) >= 1);

    TraceLog rootless("t");
    rootless.append_unchecked({"t", 1, 2, "a", 0, 1, {}});
    rootless.append_unchecked({"t", 2, 1, "b", 0, 1, {}});
    auto rc = codes(validate_trace(rootless));
    CHECK(std::count(rc.begin(), rc.end(), "E-NO-ROOT") == 1);
}

TEST_CASE("JSON lines round trip") {
    auto log = from_sim(run("fig1-react", LoadStrategy::Prefetch));
    auto text = to_jsonl(log);
    CHECK(std::count(text.begin(), text.end(), '\n') == static_cast<long>(log.spans().size()));
    auto back = from_jsonl(text);
    CHECK(back.trace_id() == log.trace_id());
    CHECK(back.spans() == log.spans());
    CHECK(to_jsonl(back) == text);
    CHECK_THROWS_AS(from_jsonl("{\"traceId\":"), FedError);
}

TEST_CASE("every simulated report yields a well-formed trace") {
    gen::Rng rng(53);
    NetworkModel net;
    net.parseMsPerKb = 1;
    net.maxConcurrent = 3;
    for (int i = 0; i < 40; ++i) {
        auto a = fixtures::analyze(gen::workspace(rng));
        for (auto s : kAllStrategies) {
            auto r = simulate(plan(a.graph, a.resolution, s), net);
            auto log = from_sim(r);
            CHECK(validate_trace(log).empty());
            CHECK(log.spans().size() == 1 + 2 * r.requestCount);
        }
    }
}

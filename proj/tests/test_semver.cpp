#include "fedplan/error.hpp"
#include "fedplan/semver.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <algorithm>

using namespace fedplan::semver;
using fedplan::FedError;

namespace {

std::string code_of(auto&& fn) {
    try {
        fn();
    } catch (const FedError& e) {
        return e.code();
    }
    return "";
}

}  // namespace

TEST_CASE("parse_version") {
    CHECK(parse_version("18.2.0") == Version{18, 2, 0});
    CHECK(parse_version("0.0.0") == Version{0, 0, 0});
    CHECK(code_of([] { parse_version("1.0.0-rc.1"); }) == "E-BAD-VERSION");
    CHECK(code_of([] { parse_version("1.2"); }) == "E-BAD-VERSION");
    CHECK(code_of([] { parse_version("1.2.3+build"); }) == "E-BAD-VERSION");
    CHECK(code_of([] { parse_version("01.2.3"); }) == "E-BAD-VERSION");
    CHECK(code_of([] { parse_version(""); }) == "E-BAD-VERSION");
    CHECK(parse_version("18.2.0").str() == "18.2.0");
}

TEST_CASE("parse_range basic forms") {
    CHECK(parse_range("^1.2.3") == VersionRange({{{1, 2, 3}, Version{2, 0, 0}}}));
    CHECK(parse_range("*") == VersionRange::any());
    CHECK(parse_range("^1.2.3").str() == ">=1.2.3 <2.0.0");
    CHECK(parse_range("*").str() == "*");
    CHECK(parse_range("~1.2.3") == VersionRange({{{1, 2, 3}, Version{1, 3, 0}}}));
    CHECK(parse_range("^0.2.3") == VersionRange({{{0, 2, 3}, Version{0, 3, 0}}}));
    CHECK(parse_range("^0.0.3") == VersionRange({{{0, 0, 3}, Version{0, 0, 4}}}));
    CHECK(code_of([] { parse_range("^"); }) == "E-BAD-RANGE");
    CHECK(code_of([] { parse_range(">=1.0.0 ||"); }) == "E-BAD-RANGE");
    CHECK(code_of([] { parse_range("latest"); }) == "E-BAD-RANGE");
}

TEST_CASE("union range membership matches the direct predicate") {
    const std::string text = ">=1.0.0 <1.5.0 || 2.0.0";
    auto r = parse_range(text);
    CHECK(r.intervals().size() == 2);
    CHECK(r.contains({2, 0, 0}));
    CHECK_FALSE(r.contains({2, 0, 1}));
    for (const auto& v : oracle::version_grid()) CHECK(r.contains(v) == oracle::range_admits(text, v));
}

TEST_CASE("satisfies") {
    CHECK(satisfies(parse_range("^18.2.0"), {18, 2, 0}));
    CHECK_FALSE(satisfies(parse_range("~1.2.3"), {1, 3, 0}));
    CHECK(satisfies(parse_range("^0.2.3"), {0, 2, 9}));
    CHECK(oracle::range_admits("^0.2.3", {0, 2, 9}));
}

TEST_CASE("intersect") {
    CHECK(intersect(parse_range("^1.2.0"), parse_range("*")) == parse_range("^1.2.0"));
    CHECK(intersect(parse_range("^1.2.0"), parse_range("^2.0.0")).empty());
    CHECK(intersect(parse_range("^1.2.0"), parse_range("^2.0.0")).str() == "<0.0.0");

    auto r = intersect(parse_range(">=1.4.0"), parse_range("~1.4.2 || ^1.6.0"));
    CHECK(r == VersionRange({{{1, 4, 2}, Version{1, 5, 0}}, {{1, 6, 0}, Version{2, 0, 0}}}));
    for (const auto& v : oracle::version_grid())
        CHECK(r.contains(v) == (oracle::range_admits(">=1.4.0", v) && oracle::range_admits("~1.4.2 || ^1.6.0", v)));
}

TEST_CASE("highest_satisfying") {
    std::vector<Version> cands{{18, 0, 0}, {18, 2, 0}, {19, 0, 0}};
    CHECK(highest_satisfying(parse_range("^18.0.0"), cands) == Version{18, 2, 0});
    // filter then max
    std::vector<Version> ok;
    std::copy_if(cands.begin(), cands.end(), std::back_inserter(ok),
                 [](const Version& v) { return oracle::range_admits("^18.0.0", v); });
    CHECK(*std::max_element(ok.begin(), ok.end()) == Version{18, 2, 0});

    CHECK_FALSE(highest_satisfying(parse_range("*"), {}).has_value());
    std::vector<Version> one{{1, 0, 0}};
    CHECK_FALSE(highest_satisfying(parse_range("<1.0.0"), one).has_value());
}

TEST_CASE("normalization makes membership-equal ranges equal") {
    CHECK(parse_range(">=1.0.0 <2.0.0 || >=2.0.0 <3.0.0") == parse_range(">=1.0.0 <3.0.0"));
    CHECK(parse_range("1.0.0 || 1.0.1") == parse_range(">=1.0.0 <1.0.2"));
    CHECK(parse_range("<1.0.0 >=2.0.0") == VersionRange::none());
}

TEST_CASE("generated ranges agree with the direct predicate") {
    gen::Rng rng(7);
    auto grid = oracle::version_grid();
    std::size_t mismatches = 0;
    for (int i = 0; i < 300; ++i) {
        auto a = gen::range_text(rng);
        auto b = gen::range_text(rng);
        auto ra = parse_range(a);
        auto rb = parse_range(b);
        auto both = intersect(ra, rb);
        // canonical text re-parses to the same range
        CHECK(parse_range(ra.str()) == ra);
        for (const auto& v : grid) {
            bool ia = oracle::range_admits(a, v);
            bool ib = oracle::range_admits(b, v);
            if (satisfies(ra, v) != ia || both.contains(v) != (ia && ib)) ++mismatches;
        }
    }
    CHECK(mismatches == 0);
}

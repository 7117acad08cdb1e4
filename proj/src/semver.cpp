#include "fedplan/semver.hpp"

#include "fedplan/error.hpp"

#include <algorithm>
#include <charconv>
#include <limits>

namespace fedplan::semver {

namespace {

bool parse_component(std::string_view s, std::uint64_t& out) {
    if (s.empty() || (s.size() > 1 && s[0] == '0')) return false;
    if (!std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
        return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    // Leave room for next() on the patch component.
    return ec == std::errc{} && ptr == s.data() + s.size() &&
           out < std::numeric_limits<std::uint64_t>::max();
}

std::optional<Version> try_parse_version(std::string_view text) {
    Version v;
    std::uint64_t* parts[] = {&v.major, &v.minor, &v.patch};
    for (int i = 0; i < 3; ++i) {
        auto dot = text.find('.');
        std::string_view piece = i < 2 ? text.substr(0, dot) : text;
        if (i < 2 && dot == std::string_view::npos) return std::nullopt;
        if (!parse_component(piece, *parts[i])) return std::nullopt;
        if (i < 2) text.remove_prefix(dot + 1);
    }
    return v;
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

[[noreturn]] void bad_range(std::string_view whole, std::string_view why) {
    throw FedError("E-BAD-RANGE", "", "cannot parse range \"" + std::string(whole) +
                                          "\": " + std::string(why));
}

Interval comparator_interval(std::string_view whole, std::string_view tok) {
    if (tok == "*") return {Version{}, std::nullopt};

    std::string_view op;
    for (std::string_view candidate : {">=", "<=", ">", "<", "=", "^", "~"}) {
        if (tok.substr(0, candidate.size()) == candidate) {
            op = candidate;
            break;
        }
    }
    auto v = try_parse_version(tok.substr(op.size()));
    if (!v) bad_range(whole, "unsupported token \"" + std::string(tok) + "\"");

    if (op.empty() || op == "=") return {*v, v->next()};
    if (op == ">=") return {*v, std::nullopt};
    if (op == ">") return {v->next(), std::nullopt};
    if (op == "<=") return {Version{}, v->next()};
    if (op == "<") return {Version{}, *v};
    if (op == "~") return {*v, Version{v->major, v->minor + 1, 0}};
    // caret: bump the left-most non-zero component
    if (v->major > 0) return {*v, Version{v->major + 1, 0, 0}};
    if (v->minor > 0) return {*v, Version{0, v->minor + 1, 0}};
    return {*v, Version{0, 0, v->patch + 1}};
}

Interval meet(const Interval& a, const Interval& b) {
    Interval out{std::max(a.lo, b.lo), std::nullopt};
    if (a.hi && b.hi) out.hi = std::min(*a.hi, *b.hi);
    else if (a.hi) out.hi = a.hi;
    else out.hi = b.hi;
    return out;
}

}  // namespace

std::string Version::str() const {
    return std::to_string(major) + "." + std::to_string(minor) + "." + std::to_string(patch);
}

VersionRange::VersionRange(std::vector<Interval> intervals) {
    std::erase_if(intervals, [](const Interval& i) { return i.empty(); });
    std::sort(intervals.begin(), intervals.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    for (auto& iv : intervals) {
        if (!_intervals.empty()) {
            auto& last = _intervals.back();
            if (!last.hi) continue;  // already unbounded, swallows the rest
            if (iv.lo <= *last.hi) {
                if (!iv.hi || *iv.hi > *last.hi) last.hi = iv.hi;
                continue;
            }
        }
        _intervals.push_back(iv);
    }
}

VersionRange VersionRange::any() { return VersionRange({Interval{Version{}, std::nullopt}}); }

VersionRange VersionRange::exactly(const Version& v) { return VersionRange({Interval{v, v.next()}}); }

bool VersionRange::contains(const Version& v) const noexcept {
    return std::any_of(_intervals.begin(), _intervals.end(),
                       [&](const Interval& i) { return i.contains(v); });
}

std::string VersionRange::str() const {
    if (_intervals.empty()) return "<0.0.0";
    if (*this == any()) return "*";
    std::string out;
    for (const auto& iv : _intervals) {
        if (!out.empty()) out += " || ";
        out += ">=" + iv.lo.str();
        if (iv.hi) out += " <" + iv.hi->str();
    }
    return out;
}

Version parse_version(std::string_view text) {
    auto v = try_parse_version(text);
    if (!v) throw FedError("E-BAD-VERSION", "", "cannot parse version \"" + std::string(text) + "\"");
    return *v;
}

VersionRange parse_range(std::string_view text) {
    std::vector<Interval> disjuncts;
    std::string_view rest = text;
    while (true) {
        auto bar = rest.find("||");
        std::string_view part = rest.substr(0, bar);
        auto tokens = split_ws(part);
        if (tokens.empty()) bad_range(text, "empty comparator set");
        Interval acc{Version{}, std::nullopt};
        for (auto tok : tokens) acc = meet(acc, comparator_interval(text, tok));
        disjuncts.push_back(acc);
        if (bar == std::string_view::npos) break;
        rest.remove_prefix(bar + 2);
    }
    return VersionRange(std::move(disjuncts));
}

bool satisfies(const VersionRange& r, const Version& v) noexcept { return r.contains(v); }

VersionRange intersect(const VersionRange& a, const VersionRange& b) {
    std::vector<Interval> out;
    for (const auto& x : a.intervals())
        for (const auto& y : b.intervals()) out.push_back(meet(x, y));
    return VersionRange(std::move(out));
}

std::optional<Version> highest_satisfying(const VersionRange& r,
                                          std::span<const Version> candidates) {
    std::optional<Version> best;
    for (const auto& c : candidates)
        if (r.contains(c) && (!best || c > *best)) best = c;
    return best;
}

}  // namespace fedplan::semver

#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fedplan::semver {

/// A release version MAJOR.MINOR.PATCH. Prerelease and build metadata are
/// rejected at parse time.
struct Version {
    std::uint64_t major = 0;
    std::uint64_t minor = 0;
    std::uint64_t patch = 0;

    /// The immediate successor in the total order, x.y.(z+1).
    Version next() const noexcept { return {major, minor, patch + 1}; }

    std::string str() const;

    friend auto operator<=>(const Version&, const Version&) = default;
};

/// Half-open interval [lo, hi). An absent upper bound means unbounded.
struct Interval {
    Version lo;
    std::optional<Version> hi;

    bool empty() const noexcept { return hi && *hi <= lo; }
    bool contains(const Version& v) const noexcept { return lo <= v && (!hi || v < *hi); }

    friend bool operator==(const Interval&, const Interval&) = default;
};

/// A union of disjoint, non-adjacent, non-empty intervals kept in ascending
/// order. Two ranges with identical membership compare equal.
class VersionRange {
public:
    VersionRange() = default;  // the empty range
    explicit VersionRange(std::vector<Interval> intervals);

    static VersionRange any();
    static VersionRange none() { return {}; }
    static VersionRange exactly(const Version& v);

    const std::vector<Interval>& intervals() const noexcept { return _intervals; }
    bool empty() const noexcept { return _intervals.empty(); }
    bool contains(const Version& v) const noexcept;

    /// Canonical rendering: ">=lo <hi" conjunctions joined by " || ".
    std::string str() const;

    friend bool operator==(const VersionRange&, const VersionRange&) = default;

private:
    std::vector<Interval> _intervals;
};

/// Throws FedError E-BAD-VERSION.
Version parse_version(std::string_view text);

/// Throws FedError E-BAD-RANGE.
VersionRange parse_range(std::string_view text);

bool satisfies(const VersionRange& r, const Version& v) noexcept;

VersionRange intersect(const VersionRange& a, const VersionRange& b);

std::optional<Version> highest_satisfying(const VersionRange& r,
                                          std::span<const Version> candidates);

}  // namespace fedplan::semver

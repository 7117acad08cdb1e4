#pragma once

#include "fedplan/error.hpp"
#include "fedplan/simulator.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace fedplan {

using SpanId = std::uint64_t;
using AttributeValue = std::variant<std::string, std::int64_t>;
using Attributes = std::map<std::string, AttributeValue>;

struct Span {
    std::string traceId;
    SpanId spanId = 0;
    std::optional<SpanId> parentSpanId;
    std::string name;
    double startMs = 0;
    double endMs = 0;
    Attributes attributes;

    friend bool operator==(const Span&, const Span&) = default;
};

/// Append-only span log for one analysis run. Span ids are assigned from a
/// counter starting at 1.
class TraceLog {
public:
    explicit TraceLog(std::string traceId) : _traceId(std::move(traceId)) {}

    /// Throws FedError E-BAD-INTERVAL (end before start, or escaping the
    /// parent's interval) or E-NO-PARENT.
    SpanId record(std::string name, std::optional<SpanId> parent, double startMs, double endMs,
                  Attributes attributes = {});

    /// Appends a span verbatim, without checks. Used when reading logs back.
    void append_unchecked(Span s);

    const std::string& trace_id() const noexcept { return _traceId; }
    const std::vector<Span>& spans() const noexcept { return _spans; }
    const Span* find(SpanId id) const noexcept;

private:
    std::string _traceId;
    std::vector<Span> _spans;
    SpanId _next = 1;
};

/// Root "load" span over [0, timeToInteractive], one "fetch.request" span
/// per request over [start, done] and one "parse.module" span per request
/// over [done, parseDone]. Parse spans are children of the root because
/// parsing happens after the fetch interval closes.
TraceLog from_sim(const SimReport& report);

/// E-MULTIROOT, E-NO-ROOT, E-DUP-SPAN, E-NO-PARENT, E-BAD-INTERVAL,
/// E-TRACE-ID. Empty iff the log is well formed.
std::vector<Diagnostic> validate_trace(const TraceLog& log);

/// One JSON object per line.
std::string to_jsonl(const TraceLog& log);
/// Throws FedError E-SYNTAX or E-MISSING-FIELD.
TraceLog from_jsonl(std::string_view text);

}  // namespace fedplan

#include "fedplan/trace.hpp"

#include "json_util.hpp"

#include <nlohmann/json.hpp>

#include <set>
#include <sstream>

namespace fedplan {

SpanId TraceLog::record(std::string name, std::optional<SpanId> parent, double startMs, double endMs,
                        Attributes attributes) {
    if (!(endMs >= startMs))
        throw FedError("E-BAD-INTERVAL", name, "span ends before it starts");
    if (parent) {
        const Span* p = find(*parent);
        if (!p) throw FedError("E-NO-PARENT", name, "parent span " + std::to_string(*parent) + " does not exist");
        if (startMs < p->startMs || endMs > p->endMs)
            throw FedError("E-BAD-INTERVAL", name, "span escapes its parent \"" + p->name + "\"");
    }
    Span s{_traceId, _next++, parent, std::move(name), startMs, endMs, std::move(attributes)};
    _spans.push_back(std::move(s));
    return _spans.back().spanId;
}

void TraceLog::append_unchecked(Span s) {
    _next = std::max(_next, s.spanId + 1);
    _spans.push_back(std::move(s));
}

const Span* TraceLog::find(SpanId id) const noexcept {
    for (const auto& s : _spans)
        if (s.spanId == id) return &s;
    return nullptr;
}

TraceLog from_sim(const SimReport& report) {
    TraceLog log("fedplan-" + std::string(to_string(report.strategy)));
    SpanId root = log.record("load", std::nullopt, 0.0, report.timeToInteractiveMs,
                             {{"strategy", std::string(to_string(report.strategy))},
                              {"totalBytes", report.totalBytes},
                              {"requestCount", static_cast<std::int64_t>(report.requestCount)}});
    for (const auto& t : report.timeline) {
        auto id = static_cast<std::int64_t>(t.requestId);
        log.record("fetch.request", root, t.startMs, t.doneMs,
                   {{"requestId", id}, {"bytes", t.bytes}, {"headersMs", detail::format_double(t.headersMs)}});
        log.record("parse.module", root, t.doneMs, t.parseDoneMs, {{"requestId", id}});
    }
    return log;
}

std::vector<Diagnostic> validate_trace(const TraceLog& log) {
    std::vector<Diagnostic> out;
    std::set<SpanId> ids;
    std::size_t roots = 0;
    for (const auto& s : log.spans()) {
        std::string where = "span " + std::to_string(s.spanId);
        if (!ids.insert(s.spanId).second)
            out.push_back(error("E-DUP-SPAN", where, "span id is not unique"));
        if (s.traceId != log.trace_id())
            out.push_back(error("E-TRACE-ID", where, "span belongs to trace \"" + s.traceId + "\""));
        if (!(s.endMs >= s.startMs))
            out.push_back(error("E-BAD-INTERVAL", where, "span ends before it starts"));
        if (!s.parentSpanId) {
            ++roots;
            continue;
        }
        const Span* p = log.find(*s.parentSpanId);
        if (!p) {
            out.push_back(error("E-NO-PARENT", where, "parent " + std::to_string(*s.parentSpanId) + " is missing"));
        } else if (s.startMs < p->startMs || s.endMs > p->endMs) {
            out.push_back(error("E-BAD-INTERVAL", where, "span escapes its parent"));
        }
    }
    if (roots == 0) out.push_back(error("E-NO-ROOT", "", "trace has no root span"));
    if (roots > 1)
        out.push_back(error("E-MULTIROOT", "", "trace has " + std::to_string(roots) + " parentless spans"));
    return out;
}

std::string to_jsonl(const TraceLog& log) {
    std::ostringstream os;
    for (const auto& s : log.spans()) {
        nlohmann::ordered_json j;
        j["traceId"] = s.traceId;
        j["spanId"] = s.spanId;
        j["parentSpanId"] = s.parentSpanId ? nlohmann::ordered_json(*s.parentSpanId) : nlohmann::ordered_json(nullptr);
        j["name"] = s.name;
        j["startMs"] = s.startMs;
        j["endMs"] = s.endMs;
        j["attributes"] = nlohmann::ordered_json::object();
        for (const auto& [k, v] : s.attributes)
            std::visit([&](const auto& x) { j["attributes"][k] = x; }, v);
        os << j.dump() << "\n";
    }
    return os.str();
}

TraceLog from_jsonl(std::string_view text) {
    std::optional<TraceLog> log;
    std::size_t lineNo = 0;
    while (!text.empty()) {
        auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
        ++lineNo;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
        std::string where = "line " + std::to_string(lineNo);
        auto j = detail::parse_json(line, where);
        detail::expect_object(j, where);
        Span s;
        s.traceId = detail::get_string(j, "traceId", where);
        s.spanId = static_cast<SpanId>(detail::get_int(j, "spanId", where));
        const auto& parent = detail::require(j, "parentSpanId", where);
        if (!parent.is_null()) {
            if (!parent.is_number_integer()) throw FedError("E-SYNTAX", where + ".parentSpanId", "expected an integer");
            s.parentSpanId = parent.get<SpanId>();
        }
        s.name = detail::get_string(j, "name", where);
        s.startMs = detail::get_number(j, "startMs", where);
        s.endMs = detail::get_number(j, "endMs", where);
        const auto& attrs = detail::require(j, "attributes", where);
        detail::expect_object(attrs, where + ".attributes");
        for (const auto& [k, v] : attrs.items()) {
            if (v.is_number_integer()) s.attributes.emplace(k, v.get<std::int64_t>());
            else if (v.is_string()) s.attributes.emplace(k, v.get<std::string>());
            else throw FedError("E-SYNTAX", where + ".attributes." + k, "expected a string or integer");
        }
        if (!log) log.emplace(s.traceId);
        log->append_unchecked(std::move(s));
    }
    return log ? std::move(*log) : TraceLog("");
}

}  // namespace fedplan

#include "fedplan/cli.hpp"

#include "fedplan/graph.hpp"
#include "fedplan/interfaces.hpp"
#include "fedplan/manifest.hpp"
#include "fedplan/planner.hpp"
#include "fedplan/shares.hpp"
#include "fedplan/simulator.hpp"
#include "fedplan/trace.hpp"
#include "json_util.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include <unistd.h>

namespace fedplan::cli {

namespace {

using ojson = nlohmann::ordered_json;

// Input problems that are the caller's fault rather than findings about the
// federation: exit code 2.
struct UsageError {
    Diagnostic diag;
};

struct Options {
    std::string format = "table";
    bool quiet = false;
    bool allowBidirectional = false;
    std::string host;
    std::string strategy;
    std::string net;
    std::string outFile;
    bool strictTypes = false;
    std::int64_t manifestBytes = 2000;
};

class Session {
public:
    Session(const Options& o, std::ostream& out, std::ostream& err) : _o(o), _out(out), _err(err) {
        const char* env = std::getenv("FEDPLAN_COLOR");
        _color = &err == &std::cerr && ::isatty(STDERR_FILENO) && !(env && std::string(env) == "0");
    }

    bool json() const { return _o.format == "json"; }

    void report(const std::vector<Diagnostic>& diags) {
        _diags.insert(_diags.end(), diags.begin(), diags.end());
        if (json()) return;
        for (const auto& d : diags) {
            if (_o.quiet && d.severity == Severity::Warning) continue;
            std::string label = std::string(to_string(d.severity)) + "[" + d.code + "]";
            if (_color) label = (d.severity == Severity::Error ? "\x1b[31m" : "\x1b[33m") + label + "\x1b[0m";
            _err << label << " " << (d.path.empty() ? "<root>" : d.path) << ": " << d.message << "\n";
        }
    }

    const std::vector<Diagnostic>& diagnostics() const { return _diags; }

    static ojson diagnostics_json(const std::vector<Diagnostic>& diags) {
        ojson arr = ojson::array();
        for (const auto& d : diags)
            arr.push_back({{"code", d.code},
                           {"severity", std::string(to_string(d.severity))},
                           {"path", d.path},
                           {"message", d.message}});
        return arr;
    }

    /// Loads the workspace; error findings end the command.
    std::optional<LoadedWorkspace> load(bool stopOnErrors = true) {
        LoadedWorkspace lw;
        try {
            lw = load_workspace(_o.host, LoadOptions{_o.allowBidirectional});
        } catch (const FedError& e) {
            if (e.code() == "E-IO") throw UsageError{e.as_diagnostic()};
            throw;
        }
        report(lw.diagnostics);
        if (stopOnErrors && has_errors(lw.diagnostics)) return std::nullopt;
        return lw;
    }

    NetworkModel network() {
        try {
            return parse_network(detail::read_file(_o.net));
        } catch (const FedError& e) {
            throw UsageError{FedError(e.code(), _o.net + (e.path().empty() ? "" : ":" + e.path()), e.detail())
                                 .as_diagnostic()};
        }
    }

    LoadStrategy strategy() {
        try {
            return parse_strategy(_o.strategy);
        } catch (const FedError& e) {
            throw UsageError{e.as_diagnostic()};
        }
    }

    int finish_diagnostics_only() {
        if (json()) emit(ojson{{"diagnostics", diagnostics_json(_diags)}});
        return has_errors(_diags) ? kDiagnostics : kOk;
    }

    void emit(const ojson& doc) { _out << doc.dump(2) << "\n"; }
    void emit_text(const std::string& s) { _out << s; }
    void note(const std::string& s) {
        if (!_o.quiet) _out << s << "\n";
    }

    const Options& opts() const { return _o; }

private:
    const Options& _o;
    std::ostream& _out;
    std::ostream& _err;
    bool _color = false;
    std::vector<Diagnostic> _diags;
};

struct Analysis {
    LoadedWorkspace lw;
    ShareResolution res;
    ModuleGraph graph;
};

std::optional<Analysis> analyze(Session& s) {
    auto lw = s.load();
    if (!lw) return std::nullopt;
    Analysis a{std::move(*lw), {}, {}};
    a.res = resolve_shares(build_share_scope(a.lw.workspace));
    a.graph = build_graph(a.lw.workspace, a.res);
    s.report(a.graph.diagnostics);
    return a;
}

int cmd_validate(Session& s) {
    s.load(false);
    if (!s.json() && !has_errors(s.diagnostics())) s.note("ok");
    return s.finish_diagnostics_only();
}

int cmd_graph(Session& s) {
    auto a = analyze(s);
    if (!a) return s.finish_diagnostics_only();
    if (s.json()) {
        auto doc = ojson::parse(graph_to_json(a->graph));
        if (!s.diagnostics().empty()) doc["diagnostics"] = Session::diagnostics_json(s.diagnostics());
        s.emit(doc);
    } else {
        s.emit_text(export_dot(a->graph));
    }
    return kOk;
}

int cmd_resolve(Session& s) {
    auto lw = s.load();
    if (!lw) return s.finish_diagnostics_only();
    auto res = resolve_shares(build_share_scope(lw->workspace));
    if (s.json()) {
        s.emit(ojson::parse(resolution_to_json(res)));
    } else {
        std::vector<Diagnostic> diags;
        for (const auto& c : res.conflicts) {
            std::string msg = c.application + " requires " + c.package + " " + c.requiredRange.str();
            msg += c.chosenVersion ? ", negotiated " + c.chosenVersion->str() : ", nobody provides it";
            diags.push_back({c.code, c.severity, c.package, msg});
        }
        s.report(diags);
        for (const auto& [pkg, b] : res.bindings)
            s.emit_text(pkg + " -> " + b.version.str() + " (provided by " + b.provider + ")\n");
        for (const auto& f : res.fallbacks)
            s.emit_text(f.application + " falls back to " + f.package + "@" + f.ownVersion.str() + " (" +
                        std::to_string(f.sizeBytes) + " bytes)\n");
        s.emit_text("duplicateBytes " + std::to_string(res.duplicateBytes) + "\n");
    }
    return res.has_errors() ? kDiagnostics : kOk;
}

int cmd_check_types(Session& s) {
    auto lw = s.load();
    if (lw) {
        const auto& w = lw->workspace;
        s.report(check_compatibility(w, collect_expectations(w), CompatOptions{s.opts().strictTypes}));
        if (!s.json() && !has_errors(s.diagnostics())) s.note("ok");
    }
    return s.finish_diagnostics_only();
}

int cmd_plan(Session& s) {
    auto strategy = s.strategy();
    auto a = analyze(s);
    if (!a) return s.finish_diagnostics_only();
    auto p = plan(a->graph, a->res, strategy, PlanOptions{s.opts().manifestBytes});
    if (s.json()) {
        s.emit(ojson::parse(plan_to_json(p)));
    } else {
        for (const auto& r : p.requests) {
            std::string line = "#" + std::to_string(r.id) + " " + std::to_string(r.sizeBytes) + " B";
            if (!r.dependsOn.empty()) {
                line += " after";
                for (auto d : r.dependsOn) line += " #" + std::to_string(d);
            }
            line += ":";
            for (const auto& m : r.manifests) line += " " + m + "/manifest";
            for (const auto& k : r.payload) line += " " + k.str();
            s.emit_text(line + "\n");
        }
        s.emit_text("requiredBytes " + std::to_string(required_bytes(p)) + ", longest chain " +
                    std::to_string(longest_chain(p)) + "\n");
    }
    return kOk;
}

int cmd_simulate(Session& s) {
    auto strategy = s.strategy();
    auto net = s.network();
    auto a = analyze(s);
    if (!a) return s.finish_diagnostics_only();
    auto report = simulate(plan(a->graph, a->res, strategy, PlanOptions{s.opts().manifestBytes}), net);
    if (s.json()) s.emit(ojson::parse(report_to_json(report)));
    else s.emit_text(reports_to_table(std::span(&report, 1)));
    return kOk;
}

int cmd_compare(Session& s) {
    auto net = s.network();
    auto a = analyze(s);
    if (!a) return s.finish_diagnostics_only();
    auto reports = compare_strategies(a->graph, a->res, net, kAllStrategies, PlanOptions{s.opts().manifestBytes});
    if (s.json()) s.emit(ojson::parse(reports_to_json(reports)));
    else s.emit_text(reports_to_table(reports));
    return kOk;
}

int cmd_trace(Session& s) {
    auto strategy = s.strategy();
    auto net = s.network();
    auto a = analyze(s);
    if (!a) return s.finish_diagnostics_only();
    auto log = from_sim(simulate(plan(a->graph, a->res, strategy, PlanOptions{s.opts().manifestBytes}), net));
    std::ofstream f(s.opts().outFile, std::ios::binary);
    if (!f) throw UsageError{error("E-IO", s.opts().outFile, "cannot write trace file")};
    f << to_jsonl(log);
    f.close();
    auto problems = validate_trace(log);
    s.report(problems);
    if (s.json()) s.emit(ojson{{"spanCount", log.spans().size()}, {"diagnostics", Session::diagnostics_json(problems)}});
    else s.note("wrote " + std::to_string(log.spans().size()) + " spans to " + s.opts().outFile);
    return has_errors(problems) ? kDiagnostics : kOk;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Static analysis and load simulation for module federations", "fedplan"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "table", "dot"}));
    app.add_flag("--quiet", o.quiet, "Suppress warnings and informational output");
    app.add_flag("--allow-bidirectional", o.allowBidirectional,
                 "Accept remotes that reference the host back (reported as W-BIDIRECTIONAL)");

    auto host = [&](CLI::App* sub) {
        sub->add_option("host", o.host, "Path to the host federation.json")->required();
    };
    auto strategy = [&](CLI::App* sub) {
        sub->add_option("--strategy", o.strategy, "lazy | prefetch | eager | ssr")->required();
    };
    auto net = [&](CLI::App* sub) {
        sub->add_option("--net", o.net, "Path to net.json")->required();
    };
    auto manifestBytes = [&](CLI::App* sub) {
        sub->add_option("--manifest-bytes", o.manifestBytes, "Size of each remote manifest fetched by prefetch")
            ->check(CLI::NonNegativeNumber);
    };

    auto* validate = app.add_subcommand("validate", "Validate every manifest in the workspace");
    host(validate);
    auto* graph = app.add_subcommand("graph", "Emit the module graph (dot or json)");
    host(graph);
    auto* resolve = app.add_subcommand("resolve-shared", "Negotiate shared dependency versions");
    host(resolve);
    auto* types = app.add_subcommand("check-types", "Check consumer expectations against exposed interfaces");
    host(types);
    types->add_flag("--strict-types", o.strictTypes, "Treat exposes without an interface as errors");
    auto* planCmd = app.add_subcommand("plan", "Build a load plan for one strategy");
    host(planCmd);
    strategy(planCmd);
    manifestBytes(planCmd);
    auto* sim = app.add_subcommand("simulate", "Simulate one load strategy");
    host(sim);
    strategy(sim);
    net(sim);
    manifestBytes(sim);
    auto* compare = app.add_subcommand("compare", "Simulate all four strategies");
    host(compare);
    net(compare);
    manifestBytes(compare);
    auto* trace = app.add_subcommand("trace", "Export the simulated load as JSON-lines spans");
    host(trace);
    strategy(trace);
    net(trace);
    manifestBytes(trace);
    trace->add_option("--out", o.outFile, "Output .jsonl path")->required();

    std::vector<std::string> argvStore{"fedplan"};
    argvStore.insert(argvStore.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argvStore) argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    }

    const bool graphCmd = graph->parsed();
    if (o.format == "dot" && !graphCmd) {
        err << "usage error: --format dot is only valid for graph\n";
        return kUsage;
    }
    if (graphCmd && o.format == "table") o.format = "dot";

    Session s(o, out, err);
    try {
        if (validate->parsed()) return cmd_validate(s);
        if (graphCmd) return cmd_graph(s);
        if (resolve->parsed()) return cmd_resolve(s);
        if (types->parsed()) return cmd_check_types(s);
        if (planCmd->parsed()) return cmd_plan(s);
        if (sim->parsed()) return cmd_simulate(s);
        if (compare->parsed()) return cmd_compare(s);
        if (trace->parsed()) return cmd_trace(s);
    } catch (const UsageError& e) {
        err << to_string(e.diag.severity) << "[" << e.diag.code << "] " << e.diag.path << ": " << e.diag.message
            << "\n";
        return kUsage;
    } catch (const FedError& e) {
        s.report({e.as_diagnostic()});
        return s.finish_diagnostics_only();
    }
    return kUsage;
}

}  // namespace fedplan::cli

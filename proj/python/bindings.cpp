#include "fedplan/graph.hpp"
#include "fedplan/interfaces.hpp"
#include "fedplan/manifest.hpp"
#include "fedplan/planner.hpp"
#include "fedplan/semver.hpp"
#include "fedplan/shares.hpp"
#include "fedplan/simulator.hpp"
#include "fedplan/trace.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

namespace py = pybind11;
namespace sv = fedplan::semver;

namespace {

// JSON text produced by the library, handed to Python as plain objects.
py::object from_json(const std::string& text) { return py::module_::import("json").attr("loads")(text); }

std::string to_json(const py::object& obj) {
    return py::module_::import("json").attr("dumps")(obj).cast<std::string>();
}

// A dict of NetworkModel fields, or a path to net.json.
fedplan::NetworkModel network(const py::object& net) {
    if (py::isinstance<py::dict>(net)) return fedplan::parse_network(to_json(net));
    auto path = py::module_::import("os").attr("fspath")(net).cast<std::string>();
    std::ifstream in(path, std::ios::binary);
    if (!in) throw fedplan::FedError("E-IO", path, "cannot read network model");
    std::ostringstream text;
    text << in.rdbuf();
    return fedplan::parse_network(text.str());
}

/// A loaded workspace with its share resolution and module graph.
class Federation {
public:
    explicit Federation(const std::string& hostPath, bool allowBidirectional) {
        auto lw = fedplan::load_workspace(hostPath, {allowBidirectional});
        _workspace = std::move(lw.workspace);
        _diagnostics = std::move(lw.diagnostics);
        _resolution = fedplan::resolve_shares(fedplan::build_share_scope(_workspace));
        if (!fedplan::has_errors(_diagnostics)) _graph = fedplan::build_graph(_workspace, _resolution);
    }

    std::vector<std::string> applications() const {
        std::vector<std::string> out;
        for (const auto* app : _workspace.applications()) out.push_back(app->name);
        return out;
    }

    py::list diagnostics() const { return diagnostics_list(_diagnostics); }

    py::object resolution() const { return from_json(fedplan::resolution_to_json(_resolution)); }

    py::object graph() const { return from_json(fedplan::graph_to_json(require_graph())); }
    std::string dot() const { return fedplan::export_dot(require_graph()); }
    std::size_t waterfall_depth() const { return fedplan::waterfall_depth(require_graph()); }

    py::object plan(const std::string& strategy, std::int64_t manifestBytes) const {
        return from_json(fedplan::plan_to_json(make_plan(strategy, manifestBytes)));
    }

    py::object simulate(const std::string& strategy, const py::object& net, std::int64_t manifestBytes) const {
        return from_json(fedplan::report_to_json(fedplan::simulate(make_plan(strategy, manifestBytes), network(net))));
    }

    py::object compare(const py::object& net, std::int64_t manifestBytes) const {
        auto reports = fedplan::compare_strategies(require_graph(), _resolution, network(net),
                                                   fedplan::kAllStrategies, {manifestBytes});
        return from_json(fedplan::reports_to_json(reports));
    }

    py::list trace(const std::string& strategy, const py::object& net, std::int64_t manifestBytes) const {
        auto log = fedplan::from_sim(fedplan::simulate(make_plan(strategy, manifestBytes), network(net)));
        py::list out;
        std::string lines = fedplan::to_jsonl(log);
        std::size_t start = 0;
        for (auto nl = lines.find('\n'); nl != std::string::npos; start = nl + 1, nl = lines.find('\n', start))
            out.append(from_json(lines.substr(start, nl - start)));
        return out;
    }

    py::list check_types(bool strict) const {
        return diagnostics_list(fedplan::check_compatibility(
            _workspace, fedplan::collect_expectations(_workspace), fedplan::CompatOptions{strict}));
    }

private:
    static py::list diagnostics_list(const std::vector<fedplan::Diagnostic>& diags) {
        py::list out;
        for (const auto& d : diags) {
            py::dict item;
            item["code"] = d.code;
            item["severity"] = std::string(fedplan::to_string(d.severity));
            item["path"] = d.path;
            item["message"] = d.message;
            out.append(item);
        }
        return out;
    }

    const fedplan::ModuleGraph& require_graph() const {
        if (!_graph) throw fedplan::FedError("E-INVALID-WORKSPACE", "", "workspace has error diagnostics");
        return *_graph;
    }

    fedplan::LoadPlan make_plan(const std::string& strategy, std::int64_t manifestBytes) const {
        return fedplan::plan(require_graph(), _resolution, fedplan::parse_strategy(strategy), {manifestBytes});
    }

    fedplan::Workspace _workspace;
    std::vector<fedplan::Diagnostic> _diagnostics;
    fedplan::ShareResolution _resolution;
    std::optional<fedplan::ModuleGraph> _graph;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Module federation analysis and load-strategy simulation";

    static py::exception<fedplan::FedError> fedError(m, "FedError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const fedplan::FedError& e) {
            py::object exc = py::reinterpret_borrow<py::object>(fedError.ptr())(py::str(e.what()));
            py::setattr(exc, "code", py::str(e.code()));
            py::setattr(exc, "path", py::str(e.path()));
            PyErr_SetObject(fedError.ptr(), exc.ptr());
        }
    });

    py::class_<sv::Version>(m, "Version")
        .def(py::init<std::uint64_t, std::uint64_t, std::uint64_t>(), py::arg("major"), py::arg("minor"),
             py::arg("patch"))
        .def_readonly("major", &sv::Version::major)
        .def_readonly("minor", &sv::Version::minor)
        .def_readonly("patch", &sv::Version::patch)
        .def("__str__", &sv::Version::str)
        .def("__repr__", [](const sv::Version& v) { return "Version('" + v.str() + "')"; })
        .def("__eq__", [](const sv::Version& a, const sv::Version& b) { return a == b; })
        .def("__lt__", [](const sv::Version& a, const sv::Version& b) { return a < b; })
        .def("__le__", [](const sv::Version& a, const sv::Version& b) { return a <= b; })
        .def("__hash__", [](const sv::Version& v) { return py::hash(py::make_tuple(v.major, v.minor, v.patch)); });

    py::class_<sv::VersionRange>(m, "VersionRange")
        .def("__str__", &sv::VersionRange::str)
        .def("__repr__", [](const sv::VersionRange& r) { return "VersionRange('" + r.str() + "')"; })
        .def("__contains__", &sv::VersionRange::contains)
        .def("__eq__", [](const sv::VersionRange& a, const sv::VersionRange& b) { return a == b; })
        .def_property_readonly("empty", &sv::VersionRange::empty);

    m.def("parse_version", &sv::parse_version, py::arg("text"));
    m.def("parse_range", &sv::parse_range, py::arg("text"));
    m.def("satisfies", &sv::satisfies, py::arg("range"), py::arg("version"));
    m.def("intersect", &sv::intersect, py::arg("a"), py::arg("b"));
    m.def(
        "highest_satisfying",
        [](const sv::VersionRange& r, const std::vector<sv::Version>& c) { return sv::highest_satisfying(r, c); },
        py::arg("range"), py::arg("candidates"));

    m.def(
        "is_subtype",
        [](const py::object& actual, const py::object& expected) {
            return fedplan::is_subtype(fedplan::parse_type(to_json(actual)), fedplan::parse_type(to_json(expected)));
        },
        py::arg("actual"), py::arg("expected"), "Structural subtyping over JSON type nodes.");

    m.def(
        "validate_manifest",
        [](const std::string& text) {
            auto parsed = fedplan::parse_manifest(text);
            auto diags = parsed.warnings;
            auto more = fedplan::validate_manifest(parsed.manifest);
            diags.insert(diags.end(), more.begin(), more.end());
            py::list out;
            for (const auto& d : diags)
                out.append(py::dict(py::arg("code") = d.code, py::arg("severity") = std::string(fedplan::to_string(d.severity)),
                                    py::arg("path") = d.path, py::arg("message") = d.message));
            return out;
        },
        py::arg("text"));

    py::class_<Federation>(m, "Federation")
        .def(py::init<const std::string&, bool>(), py::arg("host_manifest"), py::arg("allow_bidirectional") = false)
        .def_property_readonly("applications", &Federation::applications)
        .def_property_readonly("diagnostics", &Federation::diagnostics)
        .def("resolve_shares", &Federation::resolution)
        .def("graph", &Federation::graph)
        .def("dot", &Federation::dot)
        .def("waterfall_depth", &Federation::waterfall_depth)
        .def("plan", &Federation::plan, py::arg("strategy"), py::arg("manifest_bytes") = 2000)
        .def("simulate", &Federation::simulate, py::arg("strategy"), py::arg("net"), py::arg("manifest_bytes") = 2000)
        .def("compare", &Federation::compare, py::arg("net"), py::arg("manifest_bytes") = 2000)
        .def("trace", &Federation::trace, py::arg("strategy"), py::arg("net"), py::arg("manifest_bytes") = 2000)
        .def("check_types", &Federation::check_types, py::arg("strict") = false);
}

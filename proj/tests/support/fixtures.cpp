#include "support/fixtures.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fixtures {

std::string path(const std::string& rel) { return std::string(FEDPLAN_FIXTURES_DIR) + "/" + rel; }

std::string host(const std::string& name) { return path(name + "/host/federation.json"); }

std::string golden(const std::string& rel) { return std::string(FEDPLAN_GOLDEN_DIR) + "/" + rel; }

std::string read(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Analyzed analyze(const fedplan::Workspace& w) {
    Analyzed a{w, {}, {}};
    a.resolution = fedplan::resolve_shares(fedplan::build_share_scope(w));
    a.graph = fedplan::build_graph(w, a.resolution);
    return a;
}

Analyzed analyze_fixture(const std::string& name) {
    return analyze(fedplan::load_workspace(host(name)).workspace);
}

const std::vector<std::string>& plannable() {
    static const std::vector<std::string> names{"fig1", "fig1-react", "fig2", "lodash-fallback", "strict-conflict",
                                                "type-mismatch"};
    return names;
}

}  // namespace fixtures

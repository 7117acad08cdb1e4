#pragma once

#include "fedplan/graph.hpp"
#include "fedplan/manifest.hpp"
#include "fedplan/shares.hpp"

#include <string>

namespace fixtures {

std::string path(const std::string& rel);
std::string host(const std::string& name);  // <fixtures>/<name>/host/federation.json
std::string golden(const std::string& rel);
std::string read(const std::string& path);

struct Analyzed {
    fedplan::Workspace workspace;
    fedplan::ShareResolution resolution;
    fedplan::ModuleGraph graph;
};

Analyzed analyze(const fedplan::Workspace& w);
Analyzed analyze_fixture(const std::string& name);

/// Fixture names that load without errors and can be planned.
const std::vector<std::string>& plannable();

}  // namespace fixtures

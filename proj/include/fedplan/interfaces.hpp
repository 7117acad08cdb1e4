#pragma once

#include "fedplan/error.hpp"
#include "fedplan/manifest.hpp"
#include "fedplan/types.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace fedplan {

/// Parses an interface file: {"exports": {name: typeNode}}. Type nodes may
/// use {"kind":"ref","name":X} to reuse another export's type; references
/// are inlined and a reference cycle is rejected.
/// Throws FedError E-SYNTAX or E-RECURSIVE-TYPE.
InterfaceDecl parse_interface(std::string_view text);

std::string serialize_interface(const InterfaceDecl& decl);

/// Parses a single type node document.
TypeExpr parse_type(std::string_view text);
std::string serialize_type(const TypeExpr& t);

struct CompatOptions {
    /// Report E-NO-INTERFACE as an error instead of a warning.
    bool strictTypes = false;
};

/// Every "expects" entry declared by any application in the workspace.
std::vector<Expectation> collect_expectations(const Workspace& w);

/// One result group per expectation, in input order. Empty iff all are
/// compatible.
std::vector<Diagnostic> check_compatibility(const Workspace& w,
                                            const std::vector<Expectation>& expectations,
                                            const CompatOptions& opts = {});

}  // namespace fedplan

#include "fedplan/error.hpp"

#include <algorithm>

namespace fedplan {

std::string_view to_string(Severity s) noexcept {
    return s == Severity::Error ? "error" : "warning";
}

Diagnostic error(std::string code, std::string path, std::string message) {
    return {std::move(code), Severity::Error, std::move(path), std::move(message)};
}

Diagnostic warning(std::string code, std::string path, std::string message) {
    return {std::move(code), Severity::Warning, std::move(path), std::move(message)};
}

bool has_errors(const std::vector<Diagnostic>& diags) noexcept {
    return std::any_of(diags.begin(), diags.end(),
                       [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

static std::string compose(const std::string& code, const std::string& path,
                           const std::string& message) {
    std::string out = code;
    if (!path.empty()) out += " at " + path;
    out += ": " + message;
    return out;
}

FedError::FedError(std::string code, std::string path, std::string message)
    : std::runtime_error(compose(code, path, message))
    , _code(std::move(code))
    , _path(std::move(path))
    , _detail(std::move(message)) {}

Diagnostic FedError::as_diagnostic() const { return error(_code, _path, _detail); }

}  // namespace fedplan

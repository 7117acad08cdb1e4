#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fedplan {

enum class Severity { Error, Warning };

std::string_view to_string(Severity s) noexcept;

/// A machine-readable finding. Codes are stable identifiers such as
/// "E-DANGLING-EXPOSE" or "W-SELF-RANGE".
struct Diagnostic {
    std::string code;
    Severity severity = Severity::Error;
    std::string path;
    std::string message;

    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

Diagnostic error(std::string code, std::string path, std::string message);
Diagnostic warning(std::string code, std::string path, std::string message);

bool has_errors(const std::vector<Diagnostic>& diags) noexcept;

/// Thrown for failures that abort an operation. Carries the same stable code
/// vocabulary as Diagnostic.
class FedError : public std::runtime_error {
public:
    FedError(std::string code, std::string path, std::string message);

    const std::string& code() const noexcept { return _code; }
    const std::string& path() const noexcept { return _path; }
    const std::string& detail() const noexcept { return _detail; }

    Diagnostic as_diagnostic() const;

private:
    std::string _code;
    std::string _path;
    std::string _detail;
};

}  // namespace fedplan

#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace fedplan::detail {

using nlohmann::json;

/// Parses a JSON document, rejecting duplicate object keys. Throws FedError
/// E-SYNTAX.
json parse_json(std::string_view text, const std::string& where);

/// Reads a whole file. Throws FedError E-IO.
std::string read_file(const std::filesystem::path& p);

// Typed field access. Missing required keys throw E-MISSING-FIELD and type
// mismatches throw E-SYNTAX, both naming the JSON path.
const json& require(const json& obj, std::string_view key, const std::string& path);
std::string get_string(const json& obj, std::string_view key, const std::string& path);
std::int64_t get_int(const json& obj, std::string_view key, const std::string& path);
bool get_bool(const json& obj, std::string_view key, const std::string& path);
double get_number(const json& obj, std::string_view key, const std::string& path);
void expect_object(const json& j, const std::string& path);
void expect_array(const json& j, const std::string& path);
std::string as_string(const json& j, const std::string& path);

/// Shortest decimal text that round-trips the double.
std::string format_double(double v);

}  // namespace fedplan::detail

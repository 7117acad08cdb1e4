#include "json_util.hpp"

#include "fedplan/error.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

namespace fedplan::detail {

json parse_json(std::string_view text, const std::string& where) {
    std::vector<std::set<std::string>> seen;
    std::string duplicate;
    auto cb = [&](int /*depth*/, json::parse_event_t event, json& parsed) {
        switch (event) {
            case json::parse_event_t::object_start: seen.emplace_back(); break;
            case json::parse_event_t::object_end: seen.pop_back(); break;
            case json::parse_event_t::key:
                if (!seen.back().insert(parsed.get<std::string>()).second && duplicate.empty())
                    duplicate = parsed.get<std::string>();
                break;
            default: break;
        }
        return true;
    };
    json out;
    try {
        out = json::parse(text.begin(), text.end(), cb);
    } catch (const json::parse_error& e) {
        throw FedError("E-SYNTAX", where, e.what());
    }
    if (!duplicate.empty())
        throw FedError("E-SYNTAX", where, "duplicate key \"" + duplicate + "\"");
    return out;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw FedError("E-IO", p.string(), "cannot read file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void expect_object(const json& j, const std::string& path) {
    if (!j.is_object()) throw FedError("E-SYNTAX", path, "expected an object");
}

void expect_array(const json& j, const std::string& path) {
    if (!j.is_array()) throw FedError("E-SYNTAX", path, "expected an array");
}

const json& require(const json& obj, std::string_view key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end())
        throw FedError("E-MISSING-FIELD", path + "." + std::string(key), "required field is absent");
    return *it;
}

std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string()) throw FedError("E-SYNTAX", path, "expected a string");
    return j.get<std::string>();
}

std::string get_string(const json& obj, std::string_view key, const std::string& path) {
    return as_string(require(obj, key, path), path + "." + std::string(key));
}

std::int64_t get_int(const json& obj, std::string_view key, const std::string& path) {
    const json& v = require(obj, key, path);
    if (!v.is_number_integer())
        throw FedError("E-SYNTAX", path + "." + std::string(key), "expected an integer");
    return v.get<std::int64_t>();
}

bool get_bool(const json& obj, std::string_view key, const std::string& path) {
    const json& v = require(obj, key, path);
    if (!v.is_boolean())
        throw FedError("E-SYNTAX", path + "." + std::string(key), "expected a boolean");
    return v.get<bool>();
}

double get_number(const json& obj, std::string_view key, const std::string& path) {
    const json& v = require(obj, key, path);
    if (!v.is_number())
        throw FedError("E-SYNTAX", path + "." + std::string(key), "expected a number");
    return v.get<double>();
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

}  // namespace fedplan::detail

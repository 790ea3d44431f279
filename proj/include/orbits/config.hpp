#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "orbits/errors.hpp"

// Flat structured-text configuration:
//
//   command = solve
//   model {
//     preset = rotating_kepler
//     params { omega = 1.0 }
//   }
//
// `key = value` entries and `name { ... }` blocks, nested arbitrarily;
// `#` starts a comment. Duplicate keys or blocks are errors.

namespace orbits {

class ConfigNode {
public:
    bool has_value(const std::string& key) const { return values_.count(key) > 0; }
    bool has_child(const std::string& key) const { return children_.count(key) > 0; }

    const std::string& raw(const std::string& key) const;
    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key) const;
    int get_int(const std::string& key, int fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    const ConfigNode& child(const std::string& key) const;
    const std::map<std::string, std::string>& values() const { return values_; }
    const std::map<std::string, ConfigNode>& children() const { return children_; }

    void set(const std::string& key, const std::string& value);
    ConfigNode& add_child(const std::string& key);

private:
    std::map<std::string, std::string> values_;
    std::map<std::string, ConfigNode> children_;
};

ConfigNode parse_config_text(const std::string& text);
ConfigNode parse_config_file(const std::filesystem::path& path);

}  // namespace orbits

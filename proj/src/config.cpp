#include "orbits/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <vector>

namespace orbits {

namespace {

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

bool valid_key(const std::string& k) {
    if (k.empty()) return false;
    for (char c : k)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') return false;
    return true;
}

}  // namespace

const std::string& ConfigNode::raw(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing config key '" + key + "'");
    return it->second;
}

std::string ConfigNode::get_string(const std::string& key) const { return raw(key); }

std::string ConfigNode::get_string(const std::string& key, const std::string& fallback) const {
    return has_value(key) ? raw(key) : fallback;
}

double ConfigNode::get_double(const std::string& key) const {
    const std::string& v = raw(key);
    try {
        size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': expected a number, got '" + v + "'");
    }
}

double ConfigNode::get_double(const std::string& key, double fallback) const {
    return has_value(key) ? get_double(key) : fallback;
}

int ConfigNode::get_int(const std::string& key) const {
    double d = get_double(key);
    int i = static_cast<int>(d);
    if (static_cast<double>(i) != d)
        throw ConfigError("config key '" + key + "': expected an integer");
    return i;
}

int ConfigNode::get_int(const std::string& key, int fallback) const {
    return has_value(key) ? get_int(key) : fallback;
}

bool ConfigNode::get_bool(const std::string& key, bool fallback) const {
    if (!has_value(key)) return fallback;
    const std::string& v = raw(key);
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    throw ConfigError("config key '" + key + "': expected true/false");
}

const ConfigNode& ConfigNode::child(const std::string& key) const {
    auto it = children_.find(key);
    if (it == children_.end()) throw ConfigError("missing config block '" + key + "'");
    return it->second;
}

void ConfigNode::set(const std::string& key, const std::string& value) {
    if (values_.count(key) || children_.count(key))
        throw ConfigError("duplicate config key '" + key + "'");
    values_[key] = value;
}

ConfigNode& ConfigNode::add_child(const std::string& key) {
    if (children_.count(key) || values_.count(key))
        throw ConfigError("duplicate config block '" + key + "'");
    return children_[key];
}

ConfigNode parse_config_text(const std::string& text) {
    ConfigNode root;
    std::vector<ConfigNode*> stack{&root};
    std::istringstream in(text);
    std::string line;
    int lineno = 0;

    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string s = trim(line);
        if (s.empty()) continue;
        const std::string where = " (line " + std::to_string(lineno) + ")";

        if (s == "}") {
            if (stack.size() == 1) throw ConfigError("unmatched '}'" + where);
            stack.pop_back();
            continue;
        }
        if (s.back() == '{') {
            std::string name = trim(s.substr(0, s.size() - 1));
            if (!valid_key(name)) throw ConfigError("bad block name '" + name + "'" + where);
            stack.push_back(&stack.back()->add_child(name));
            continue;
        }
        size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected 'key = value', block start or '}'" + where);
        std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));
        if (!valid_key(key)) throw ConfigError("bad key '" + key + "'" + where);
        if (value.empty()) throw ConfigError("empty value for '" + key + "'" + where);
        stack.back()->set(key, value);
    }
    if (stack.size() != 1) throw ConfigError("unterminated block at end of file");
    return root;
}

ConfigNode parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

}  // namespace orbits

#include "neuropend/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace neuropend {

std::string trim(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = text.find_last_not_of(" \t\r\n");
    return std::string(text.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        out.push_back(trim(text.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

double parse_double(std::string_view text, const std::string& path) {
    const std::string s = trim(text);
    if (s.empty()) throw ConfigError(path, "expected a number");
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE) {
        throw ConfigError(path, "expected a number, got '" + s + "'");
    }
    return v;
}

ConfigMap ConfigMap::parse(std::string_view text, std::string_view origin) {
    ConfigMap map;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(std::string(origin) + ":" + std::to_string(lineno), "expected 'key = value'");
        }
        const std::string key = trim(std::string_view(body).substr(0, eq));
        if (key.empty()) {
            throw ConfigError(std::string(origin) + ":" + std::to_string(lineno), "empty key");
        }
        map.set(key, trim(std::string_view(body).substr(eq + 1)));
    }
    return map;
}

ConfigMap ConfigMap::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open file");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path);
}

void ConfigMap::set(const std::string& key, const std::string& value) { values_[key] = value; }

void ConfigMap::merge(const ConfigMap& other) {
    for (const auto& [k, v] : other.values_) values_[k] = v;
}

std::optional<std::string> ConfigMap::get(const std::string& key) const {
    if (auto it = values_.find(key); it != values_.end()) return it->second;
    return std::nullopt;
}

std::string ConfigMap::get_string(const std::string& key, const std::string& fallback) const {
    return get(key).value_or(fallback);
}

double ConfigMap::get_double(const std::string& key, double fallback) const {
    if (auto v = get(key)) return parse_double(*v, key);
    return fallback;
}

int ConfigMap::get_int(const std::string& key, int fallback) const {
    if (auto v = get(key)) {
        const double d = parse_double(*v, key);
        if (d != static_cast<int>(d)) throw ConfigError(key, "expected an integer");
        return static_cast<int>(d);
    }
    return fallback;
}

bool ConfigMap::get_bool(const std::string& key, bool fallback) const {
    if (auto v = get(key)) {
        if (*v == "true" || *v == "1" || *v == "yes") return true;
        if (*v == "false" || *v == "0" || *v == "no") return false;
        throw ConfigError(key, "expected true or false");
    }
    return fallback;
}

std::vector<double> ConfigMap::get_doubles(const std::string& key) const {
    std::vector<double> out;
    if (auto v = get(key)) {
        for (const auto& part : split(*v, ',')) out.push_back(parse_double(part, key));
    }
    return out;
}

std::vector<std::string> ConfigMap::keys_with_prefix(std::string_view prefix) const {
    std::vector<std::string> out;
    for (const auto& [k, v] : values_) {
        if (std::string_view(k).starts_with(prefix)) out.push_back(k);
    }
    return out;
}

std::string ConfigMap::to_text() const {
    std::string out;
    for (const auto& [k, v] : values_) out += k + " = " + v + "\n";
    return out;
}

}  // namespace neuropend

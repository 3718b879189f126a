#pragma once

// Flat `dotted.key = value` configuration text.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace neuropend {

/// Rejected configuration, carrying the offending key path.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string path, const std::string& message)
        : std::runtime_error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}

    [[nodiscard]] const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

class ConfigMap {
public:
    /// Parses lines of `key = value`; `#` starts a comment. Later keys override earlier ones.
    static ConfigMap parse(std::string_view text, std::string_view origin = "<config>");
    static ConfigMap load(const std::string& path);

    void set(const std::string& key, const std::string& value);
    void merge(const ConfigMap& other);
    [[nodiscard]] bool contains(const std::string& key) const { return values_.contains(key); }
    [[nodiscard]] std::optional<std::string> get(const std::string& key) const;

    [[nodiscard]] std::string get_string(const std::string& key, const std::string& fallback) const;
    [[nodiscard]] double get_double(const std::string& key, double fallback) const;
    [[nodiscard]] int get_int(const std::string& key, int fallback) const;
    [[nodiscard]] bool get_bool(const std::string& key, bool fallback) const;
    [[nodiscard]] std::vector<double> get_doubles(const std::string& key) const;

    /// Keys starting with `prefix`.
    [[nodiscard]] std::vector<std::string> keys_with_prefix(std::string_view prefix) const;
    [[nodiscard]] const std::map<std::string, std::string>& values() const noexcept { return values_; }
    [[nodiscard]] std::string to_text() const;

private:
    std::map<std::string, std::string> values_;
};

[[nodiscard]] double parse_double(std::string_view text, const std::string& path);
[[nodiscard]] std::vector<std::string> split(std::string_view text, char sep);
[[nodiscard]] std::string trim(std::string_view text);

}  // namespace neuropend

#pragma once

// Strict sectioned key = value configuration. Every key must be read by the
// consumer; leftovers are reported with their line numbers.

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace abcd::cli {

class ConfigError : public std::runtime_error {
  public:
    ConfigError(const std::string& where, std::size_t line, const std::string& msg);
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConfigEntry {
    std::string value;
    std::size_t line = 0;
    mutable bool used = false;
};

class Config {
  public:
    Config() = default;

    static Config parse(const std::string& text, const std::string& source = "<config>");
    static Config load(const std::filesystem::path& p);

    [[nodiscard]] const std::string& source() const { return source_; }
    [[nodiscard]] const std::string& text() const { return text_; }
    [[nodiscard]] bool has(const std::string& section, const std::string& key) const;
    [[nodiscard]] bool has_section(const std::string& section) const;

    [[nodiscard]] double get_double(const std::string& section, const std::string& key, double fallback) const;
    [[nodiscard]] std::optional<double> find_double(const std::string& section, const std::string& key) const;
    [[nodiscard]] long long get_int(const std::string& section, const std::string& key, long long fallback) const;
    [[nodiscard]] bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
    [[nodiscard]] std::string get_string(const std::string& section, const std::string& key,
                                         const std::string& fallback) const;
    //! Comma or whitespace separated numbers.
    [[nodiscard]] std::vector<double> get_doubles(const std::string& section, const std::string& key,
                                                  const std::vector<double>& fallback) const;
    //! Comma separated items, each "x:y".
    [[nodiscard]] std::vector<std::pair<double, double>> get_pairs(const std::string& section, const std::string& key) const;

    //! Throws ConfigError naming the first key nobody asked for.
    void require_all_used() const;

    [[nodiscard]] ConfigError error_at(const std::string& section, const std::string& key, const std::string& msg) const;

  private:
    const ConfigEntry* find(const std::string& section, const std::string& key) const;

    std::string source_ = "<config>";
    std::string text_;
    std::map<std::string, std::map<std::string, ConfigEntry>> sections_;
};

//! Accepts decimal/scientific notation and exact-ish ratios "p/q".
[[nodiscard]] std::optional<double> parse_number(const std::string& s);

}  // namespace abcd::cli

#include "abcd/cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace abcd::cli {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool valid_name(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char ch) {
        return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-' || ch == '.';
    });
}

std::optional<double> parse_plain(const std::string& s) {
    if (s.empty()) return std::nullopt;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::vector<std::string> split_items(const std::string& s, bool allow_space) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        const bool sep = ch == ',' || (allow_space && std::isspace(static_cast<unsigned char>(ch)));
        if (sep) {
            if (!trim(cur).empty()) out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!trim(cur).empty()) out.push_back(trim(cur));
    return out;
}

}  // namespace

ConfigError::ConfigError(const std::string& where, std::size_t line, const std::string& msg)
    : std::runtime_error(where + ":" + std::to_string(line) + ": " + msg) {}

std::optional<double> parse_number(const std::string& raw) {
    const std::string s = trim(raw);
    const auto slash = s.find('/');
    if (slash == std::string::npos) return parse_plain(s);
    const auto p = parse_plain(trim(s.substr(0, slash)));
    const auto q = parse_plain(trim(s.substr(slash + 1)));
    if (!p || !q || *q == 0.0) return std::nullopt;
    return *p / *q;
}

Config Config::parse(const std::string& text, const std::string& source) {
    Config c;
    c.source_ = source;
    c.text_ = text;
    std::istringstream is(text);
    std::string raw;
    std::string section;
    std::size_t lineno = 0;
    while (std::getline(is, raw)) {
        ++lineno;
        std::string line = raw;
        // Inline comments need a preceding blank so values like "a#b" survive.
        for (std::size_t i = 0; i < line.size(); ++i) {
            if ((line[i] == '#' || line[i] == ';') && (i == 0 || std::isspace(static_cast<unsigned char>(line[i - 1])))) {
                line.resize(i);
                break;
            }
        }
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(source, lineno, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (!valid_name(section)) throw ConfigError(source, lineno, "invalid section name '" + section + "'");
            c.sections_[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(source, lineno, "expected 'key = value'");
        if (section.empty()) throw ConfigError(source, lineno, "key outside of any [section]");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!valid_name(key)) throw ConfigError(source, lineno, "invalid key '" + key + "'");
        auto& sec = c.sections_[section];
        if (sec.count(key)) {
            throw ConfigError(source, lineno,
                              "duplicate key '" + key + "' in [" + section + "] (first at line " +
                                  std::to_string(sec[key].line) + ")");
        }
        sec[key] = ConfigEntry{value, lineno, false};
    }
    return c;
}

Config Config::load(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw ConfigError("cannot read config file " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), p.string());
}

const ConfigEntry* Config::find(const std::string& section, const std::string& key) const {
    auto s = sections_.find(section);
    if (s == sections_.end()) return nullptr;
    auto k = s->second.find(key);
    if (k == s->second.end()) return nullptr;
    k->second.used = true;
    return &k->second;
}

bool Config::has(const std::string& section, const std::string& key) const {
    auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
}

bool Config::has_section(const std::string& section) const { return sections_.count(section) > 0; }

ConfigError Config::error_at(const std::string& section, const std::string& key, const std::string& msg) const {
    auto s = sections_.find(section);
    std::size_t line = 0;
    if (s != sections_.end()) {
        auto k = s->second.find(key);
        if (k != s->second.end()) line = k->second.line;
    }
    return ConfigError(source_, line, "[" + section + "] " + key + ": " + msg);
}

std::optional<double> Config::find_double(const std::string& section, const std::string& key) const {
    const auto* e = find(section, key);
    if (!e) return std::nullopt;
    const auto v = parse_number(e->value);
    if (!v) throw error_at(section, key, "expected a number, got '" + e->value + "'");
    return v;
}

double Config::get_double(const std::string& section, const std::string& key, double fallback) const {
    return find_double(section, key).value_or(fallback);
}

long long Config::get_int(const std::string& section, const std::string& key, long long fallback) const {
    const auto* e = find(section, key);
    if (!e) return fallback;
    char* end = nullptr;
    const long long v = std::strtoll(e->value.c_str(), &end, 10);
    if (e->value.empty() || end != e->value.c_str() + e->value.size())
        throw error_at(section, key, "expected an integer, got '" + e->value + "'");
    return v;
}

bool Config::get_bool(const std::string& section, const std::string& key, bool fallback) const {
    const auto* e = find(section, key);
    if (!e) return fallback;
    std::string v = e->value;
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char ch) { return std::tolower(ch); });
    if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
    if (v == "false" || v == "no" || v == "off" || v == "0") return false;
    throw error_at(section, key, "expected a boolean, got '" + e->value + "'");
}

std::string Config::get_string(const std::string& section, const std::string& key, const std::string& fallback) const {
    const auto* e = find(section, key);
    return e ? e->value : fallback;
}

std::vector<double> Config::get_doubles(const std::string& section, const std::string& key,
                                        const std::vector<double>& fallback) const {
    const auto* e = find(section, key);
    if (!e) return fallback;
    std::vector<double> out;
    for (const auto& item : split_items(e->value, true)) {
        const auto v = parse_number(item);
        if (!v) throw error_at(section, key, "bad list item '" + item + "'");
        out.push_back(*v);
    }
    return out;
}

std::vector<std::pair<double, double>> Config::get_pairs(const std::string& section, const std::string& key) const {
    const auto* e = find(section, key);
    if (!e) return {};
    std::vector<std::pair<double, double>> out;
    for (const auto& item : split_items(e->value, false)) {
        const auto colon = item.find(':');
        const auto x = colon == std::string::npos ? std::nullopt : parse_number(item.substr(0, colon));
        const auto y = colon == std::string::npos ? std::nullopt : parse_number(item.substr(colon + 1));
        if (!x || !y) throw error_at(section, key, "expected 'x:y', got '" + item + "'");
        out.emplace_back(*x, *y);
    }
    return out;
}

void Config::require_all_used() const {
    const ConfigEntry* first = nullptr;
    std::string sec_name, key_name;
    for (const auto& [sname, keys] : sections_) {
        for (const auto& [kname, entry] : keys) {
            if (entry.used) continue;
            if (!first || entry.line < first->line) {
                first = &entry;
                sec_name = sname;
                key_name = kname;
            }
        }
    }
    if (first) throw ConfigError(source_, first->line, "unknown key '" + key_name + "' in [" + sec_name + "]");
}

}  // namespace abcd::cli

#pragma once

// `key = value` configuration files and the small numeric parsers the CLI shares.

#include "sdeffect/error.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <string_view>

namespace sdeffect {

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

} // namespace detail

/// Decimal ("0.5", "1e-4") or fraction ("2/3").
inline double parse_real(std::string_view text) {
    const std::string t = detail::trim(text);
    auto parse_plain = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            throw Error(ErrorKind::ParseError, "not a number: '" + std::string(text) + "'");
        }
        if (used != s.size() || !std::isfinite(v)) {
            throw Error(ErrorKind::ParseError, "not a number: '" + std::string(text) + "'");
        }
        return v;
    };
    if (auto slash = t.find('/'); slash != std::string::npos) {
        const double num = parse_plain(detail::trim(t.substr(0, slash)));
        const double den = parse_plain(detail::trim(t.substr(slash + 1)));
        if (den == 0.0) {
            throw Error(ErrorKind::ParseError, "zero denominator in '" + std::string(text) + "'");
        }
        return num / den;
    }
    return parse_plain(t);
}

inline long long parse_integer(std::string_view text) {
    const std::string t = detail::trim(text);
    long long v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
        throw Error(ErrorKind::ParseError, "not an integer: '" + std::string(text) + "'");
    }
    return v;
}

inline std::uint64_t parse_seed(std::string_view text) {
    const std::string t = detail::trim(text);
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
        throw Error(ErrorKind::ParseError, "not a 64-bit seed: '" + std::string(text) + "'");
    }
    return v;
}

class KeyValueConfig {
public:
    struct Entry {
        std::string value;
        int line = 0;
    };

    static KeyValueConfig parse(std::istream& in) {
        KeyValueConfig cfg;
        std::string raw;
        int line_no = 0;
        while (std::getline(in, raw)) {
            ++line_no;
            if (auto hash = raw.find('#'); hash != std::string::npos) {
                raw.erase(hash);
            }
            const std::string line = detail::trim(raw);
            if (line.empty()) {
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                throw Error(ErrorKind::ConfigError, "line " + std::to_string(line_no) + ": expected `key = value`");
            }
            std::string key = detail::trim(line.substr(0, eq));
            std::string value = detail::trim(line.substr(eq + 1));
            if (key.empty()) {
                throw Error(ErrorKind::ConfigError, "line " + std::to_string(line_no) + ": missing key");
            }
            if (cfg.entries_.count(key) != 0) {
                throw Error(ErrorKind::ConfigError, "line " + std::to_string(line_no) + ": duplicate key '" + key +
                                                        "' (first set on line " +
                                                        std::to_string(cfg.entries_[key].line) + ")");
            }
            cfg.entries_[key] = Entry{std::move(value), line_no};
        }
        return cfg;
    }

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    const std::map<std::string, Entry>& entries() const { return entries_; }

    const Entry& require(const std::string& key) const {
        auto it = entries_.find(key);
        if (it == entries_.end()) {
            throw Error(ErrorKind::ConfigError, "missing required key '" + key + "'");
        }
        return it->second;
    }

    /// Runs parse on the value, rewrapping failures with the key and line number.
    template <typename Parse>
    auto get(const std::string& key, Parse&& parse) const {
        const Entry& e = require(key);
        try {
            return parse(e.value);
        } catch (const Error& err) {
            throw Error(ErrorKind::ConfigError,
                        "line " + std::to_string(e.line) + ": key '" + key + "': " + err.what());
        }
    }

    void set(const std::string& key, std::string value) { entries_[key] = Entry{std::move(value), 0}; }

private:
    std::map<std::string, Entry> entries_;
};

} // namespace sdeffect

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cmcdress/laurent.hpp"

namespace cmcdress {

struct ConfigEntry {
    std::string value;
    int line{0};  // 0 for values injected from the command line
};

// Flat key-value configuration: one "key = value" per line, # comments,
// arrays as comma lists. Unknown keys are rejected at parse time with their
// line number; typed getters report the offending line on bad values.
class Config {
public:
    Config() = default;

    static Config parse(const std::string& text);
    static Config load(const std::string& path);

    bool has(const std::string& key) const;
    void set(const std::string& key, const std::string& value);

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key) const;
    int get_int(const std::string& key, int fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    std::vector<Complex> get_complex_list(const std::string& key,
                                          std::vector<Complex> fallback) const;
    // Pairs "k:l" separated by commas.
    std::vector<std::pair<int, int>> get_shift_list(const std::string& key) const;

    // Attaches "config line N:" when the key came from a file.
    [[noreturn]] void fail_key(const std::string& key, const std::string& message) const;

    // FNV-1a over the sorted "key=value" listing, command-line overrides included.
    std::uint64_t hash() const;
    std::string hash_hex() const;

    const std::map<std::string, ConfigEntry>& entries() const { return entries_; }

private:
    const ConfigEntry* find(const std::string& key) const;
    const ConfigEntry& require(const std::string& key) const;

    std::map<std::string, ConfigEntry> entries_;
};

// Accepts "1.5", "-2i", "0.3-0.25i", "1e-3+2.5e-2i".
Complex parse_complex(const std::string& text);

std::uint64_t fnv1a64(std::string_view text);

} // namespace cmcdress

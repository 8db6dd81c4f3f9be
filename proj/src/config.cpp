#include "cmcdress/config.hpp"

#include <array>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cmcdress/errors.hpp"

namespace cmcdress {

namespace {

constexpr std::array kKnownKeys = {
    "r1", "r2", "N",
    "window.m0", "window.m1", "window.n0", "window.n1",
    "seed.kind", "seed.rng", "seed.decay", "seed.amplitude", "seed.file",
    "tol.accept", "tol.structure", "tol.newton", "tol.spectral",
    "out.obj", "out.csv", "out.report", "out.lattice",
    "lattice", "shifts",
    "spectral.k", "spectral.l", "spectral.fplus",
    "spectral.a2.num", "spectral.a2.den",
    "spectral.b2.num", "spectral.b2.den",
    "spectral.c2.num", "spectral.c2.den",
};

bool known_key(const std::string& key) {
    for (const char* k : kKnownKeys) {
        if (key == k) return true;
    }
    return false;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = s.find(',', start);
        parts.push_back(trim(s.substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return parts;
}

bool parse_full_double(const std::string& text, double& out) {
    if (text.empty()) return false;
    errno = 0;
    char* end = nullptr;
    out = std::strtod(text.c_str(), &end);
    return errno == 0 && end == text.c_str() + text.size();
}

bool parse_full_int(const std::string& text, long long& out) {
    if (text.empty()) return false;
    errno = 0;
    char* end = nullptr;
    out = std::strtoll(text.c_str(), &end, 10);
    return errno == 0 && end == text.c_str() + text.size();
}

// Index of the sign that splits real and imaginary parts, npos when absent.
std::size_t split_sign(const std::string& s) {
    for (std::size_t i = s.size(); i-- > 1;) {
        char c = s[i];
        if ((c == '+' || c == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') return i;
    }
    return std::string::npos;
}

double parse_imag_part(const std::string& text) {
    if (text == "+" || text.empty()) return 1.0;
    if (text == "-") return -1.0;
    double v = 0.0;
    if (!parse_full_double(text, v)) throw ValidationError("bad imaginary part");
    return v;
}

} // namespace

Complex parse_complex(const std::string& text) {
    std::string s;
    for (char c : text) {
        if (c != ' ' && c != '\t') s.push_back(c);
    }
    if (s.empty()) throw ValidationError("empty number");
    if (s.back() == 'i') {
        std::string body = s.substr(0, s.size() - 1);
        std::size_t cut = split_sign(body);
        if (cut == std::string::npos) return Complex(0.0, parse_imag_part(body));
        double re = 0.0;
        if (!parse_full_double(body.substr(0, cut), re)) throw ValidationError("bad real part");
        return Complex(re, parse_imag_part(body.substr(cut)));
    }
    double re = 0.0;
    if (!parse_full_double(s, re)) throw ValidationError("not a number");
    return Complex(re, 0.0);
}

std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

Config Config::parse(const std::string& text) {
    Config config;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = trim(raw);
        if (s.empty() || s[0] == '#') continue;
        std::size_t eq = s.find('=');
        if (eq == std::string::npos) {
            throw ValidationError("config line " + std::to_string(line) +
                                  ": expected 'key = value'");
        }
        std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ValidationError("config line " + std::to_string(line) +
                                  ": expected 'key = value'");
        }
        if (!known_key(key)) {
            throw ValidationError("config line " + std::to_string(line) + ": unknown key '" +
                                  key + "'");
        }
        auto [it, inserted] = config.entries_.emplace(key, ConfigEntry{value, line});
        if (!inserted) {
            throw ValidationError("config line " + std::to_string(line) + ": duplicate key '" +
                                  key + "' (first set on line " + std::to_string(it->second.line) +
                                  ")");
        }
    }
    return config;
}

Config Config::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

bool Config::has(const std::string& key) const { return entries_.count(key) > 0; }

void Config::set(const std::string& key, const std::string& value) {
    entries_[key] = ConfigEntry{value, 0};
}

const ConfigEntry* Config::find(const std::string& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
}

const ConfigEntry& Config::require(const std::string& key) const {
    const ConfigEntry* e = find(key);
    if (!e) throw ValidationError("config: missing required key '" + key + "'");
    return *e;
}

void Config::fail_key(const std::string& key, const std::string& message) const {
    const ConfigEntry* e = find(key);
    if (e && e->line > 0) {
        throw ValidationError("config line " + std::to_string(e->line) + ": " + message);
    }
    throw ValidationError("config: " + message);
}

std::string Config::get_string(const std::string& key) const { return require(key).value; }

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    const ConfigEntry* e = find(key);
    return e ? e->value : fallback;
}

double Config::get_double(const std::string& key) const {
    double v = 0.0;
    if (!parse_full_double(require(key).value, v)) fail_key(key, key + " expects a number");
    return v;
}

double Config::get_double(const std::string& key, double fallback) const {
    return find(key) ? get_double(key) : fallback;
}

int Config::get_int(const std::string& key) const {
    long long v = 0;
    if (!parse_full_int(require(key).value, v) || v < INT32_MIN || v > INT32_MAX) {
        fail_key(key, key + " expects an integer");
    }
    return static_cast<int>(v);
}

int Config::get_int(const std::string& key, int fallback) const {
    return find(key) ? get_int(key) : fallback;
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const {
    const ConfigEntry* e = find(key);
    if (!e) return fallback;
    errno = 0;
    char* end = nullptr;
    std::uint64_t v = std::strtoull(e->value.c_str(), &end, 10);
    if (errno != 0 || end != e->value.c_str() + e->value.size() || e->value.empty() ||
        e->value[0] == '-') {
        fail_key(key, key + " expects an unsigned integer");
    }
    return v;
}

std::vector<Complex> Config::get_complex_list(const std::string& key,
                                              std::vector<Complex> fallback) const {
    const ConfigEntry* e = find(key);
    if (!e) return fallback;
    std::vector<Complex> values;
    auto parts = split_list(e->value);
    for (std::size_t i = 0; i < parts.size(); ++i) {
        try {
            values.push_back(parse_complex(parts[i]));
        } catch (const ValidationError&) {
            fail_key(key, key + " element " + std::to_string(i + 1) + " is not a number: '" +
                              parts[i] + "'");
        }
    }
    return values;
}

std::vector<std::pair<int, int>> Config::get_shift_list(const std::string& key) const {
    const ConfigEntry& e = require(key);
    std::vector<std::pair<int, int>> shifts;
    auto parts = split_list(e.value);
    for (std::size_t i = 0; i < parts.size(); ++i) {
        std::size_t colon = parts[i].find(':');
        long long k = 0, l = 0;
        if (colon == std::string::npos || !parse_full_int(trim(parts[i].substr(0, colon)), k) ||
            !parse_full_int(trim(parts[i].substr(colon + 1)), l)) {
            fail_key(key, key + " element " + std::to_string(i + 1) + " is not a 'k:l' pair: '" +
                              parts[i] + "'");
        }
        shifts.emplace_back(static_cast<int>(k), static_cast<int>(l));
    }
    return shifts;
}

std::uint64_t Config::hash() const {
    std::string canonical;
    for (const auto& [key, entry] : entries_) {
        canonical += key;
        canonical += '=';
        canonical += entry.value;
        canonical += '\n';
    }
    return fnv1a64(canonical);
}

std::string Config::hash_hex() const {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash()));
    return buf;
}

} // namespace cmcdress

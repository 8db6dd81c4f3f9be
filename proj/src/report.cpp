#include "cmcdress/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cmcdress/errors.hpp"

namespace cmcdress {

std::string format_double(double value) {
    if (value == 0.0) return "0";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

std::string format_complex(Complex value) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%.12g%+.12gi", value.real(), value.imag());
    return buf;
}

Report::Report(std::string title) : title_(std::move(title)) {}

void Report::section(const std::string& name) {
    if (!body_.empty()) body_.push_back("");
    body_.push_back("[" + name + "]");
}

void Report::line(const std::string& text) { body_.push_back(text); }

void Report::kv(const std::string& key, const std::string& value) {
    body_.push_back(key + " = " + value);
}

void Report::kv(const std::string& key, const char* value) { kv(key, std::string(value)); }

void Report::kv(const std::string& key, double value) { kv(key, format_double(value)); }

void Report::kv(const std::string& key, int value) { kv(key, std::to_string(value)); }

void Report::kv(const std::string& key, Complex value) { kv(key, format_complex(value)); }

void Report::kv_flag(const std::string& key, bool pass) { kv(key, pass ? "pass" : "fail"); }

void Report::trailer(const std::string& key, const std::string& value) {
    trailer_.emplace_back(key, value);
}

std::string Report::render() const {
    std::ostringstream out;
    out << title_ << '\n' << std::string(title_.size(), '=') << '\n';
    for (const auto& l : body_) out << l << '\n';
    out << "\n[trailer]\n";
    for (const auto& [key, value] : trailer_) out << key << " = " << value << '\n';
    return out.str();
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (!in.good() && !in.eof()) throw IoError("read failed on '" + path + "'");
    return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << content;
    out.flush();
    if (!out.good()) throw IoError("write failed on '" + path + "'");
}

} // namespace cmcdress

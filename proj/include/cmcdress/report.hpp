#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cmcdress/laurent.hpp"

namespace cmcdress {

// Sectioned plain-text report ending in a machine-readable [trailer] block
// of key = value lines.
class Report {
public:
    explicit Report(std::string title);

    void section(const std::string& name);
    void line(const std::string& text);
    void kv(const std::string& key, const std::string& value);
    void kv(const std::string& key, const char* value);
    void kv(const std::string& key, double value);
    void kv(const std::string& key, int value);
    void kv(const std::string& key, Complex value);
    void kv_flag(const std::string& key, bool pass);
    void trailer(const std::string& key, const std::string& value);

    std::string render() const;

private:
    std::string title_;
    std::vector<std::string> body_;
    std::vector<std::pair<std::string, std::string>> trailer_;
};

std::string format_double(double value);
std::string format_complex(Complex value);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace cmcdress

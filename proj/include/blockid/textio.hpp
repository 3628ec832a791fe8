#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace blockid::textio {

/// Formats a double with 17 significant digits, enough to reproduce the
/// value bit-exactly on parse.
std::string format_double(double value);

/// Parses a decimal number; the whole token must be consumed.
/// `context` is prepended to error messages.
double parse_double(const std::string& token, const std::string& context);

/// Same, but additionally rejects NaN/Inf.
double parse_finite_double(const std::string& token, const std::string& context);

std::vector<std::string> split(const std::string& line, char sep);
std::string trim(const std::string& s);
std::string join(const std::vector<std::string>& parts, const std::string& sep);

std::string format_double_list(const std::vector<double>& values);
std::vector<double> parse_double_list(const std::string& text, const std::string& context);

/// Key-value text file with an optional schema tag on the first line and
/// optional `[section]` headers. Entry order is preserved so emitted files
/// are diff-stable.
struct KvFile {
    struct Entry {
        std::string section;  // empty for the top-level block
        std::string key;
        std::string value;
    };

    std::string schema;
    std::vector<Entry> entries;

    void add(const std::string& section, const std::string& key, const std::string& value);
    const std::string* find(const std::string& section, const std::string& key) const;
    std::string require(const std::string& section, const std::string& key) const;
    bool has_section(const std::string& section) const;
    std::vector<std::string> sections() const;  // in first-appearance order

    std::string to_text() const;
    static KvFile from_text(const std::string& text, const std::string& origin);
    static KvFile load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;
};

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

/// FNV-1a 64-bit digest of a file's bytes, as 16 hex characters.
std::string file_digest(const std::filesystem::path& path);
std::string bytes_digest(const std::string& bytes);

}  // namespace blockid::textio

#include "blockid/textio.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "blockid/errors.hpp"

namespace blockid::textio {

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

double parse_double(const std::string& token, const std::string& context) {
    const std::string t = trim(token);
    if (t.empty()) {
        throw ParseError(context + ": empty numeric field");
    }
    const char* begin = t.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end != begin + t.size()) {
        throw ParseError(context + ": cannot parse '" + t + "' as a number");
    }
    return v;
}

double parse_finite_double(const std::string& token, const std::string& context) {
    const double v = parse_double(token, context);
    if (!std::isfinite(v)) {
        throw ParseError(context + ": non-finite value '" + trim(token) + "'");
    }
    return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::string format_double_list(const std::vector<double>& values) {
    std::vector<std::string> parts;
    parts.reserve(values.size());
    for (double v : values) parts.push_back(format_double(v));
    return join(parts, ",");
}

std::vector<double> parse_double_list(const std::string& text, const std::string& context) {
    std::vector<double> out;
    if (trim(text).empty()) return out;
    for (const std::string& tok : split(text, ',')) {
        out.push_back(parse_double(tok, context));
    }
    return out;
}

void KvFile::add(const std::string& section, const std::string& key, const std::string& value) {
    entries.push_back({section, key, value});
}

const std::string* KvFile::find(const std::string& section, const std::string& key) const {
    for (const Entry& e : entries) {
        if (e.section == section && e.key == key) return &e.value;
    }
    return nullptr;
}

std::string KvFile::require(const std::string& section, const std::string& key) const {
    if (const std::string* v = find(section, key)) return *v;
    const std::string where = section.empty() ? "top level" : "section [" + section + "]";
    throw ParseError(schema + ": missing key '" + key + "' in " + where);
}

bool KvFile::has_section(const std::string& section) const {
    for (const Entry& e : entries) {
        if (e.section == section) return true;
    }
    return false;
}

std::vector<std::string> KvFile::sections() const {
    std::vector<std::string> out;
    for (const Entry& e : entries) {
        if (e.section.empty()) continue;
        bool seen = false;
        for (const std::string& s : out) {
            if (s == e.section) {
                seen = true;
                break;
            }
        }
        if (!seen) out.push_back(e.section);
    }
    return out;
}

std::string KvFile::to_text() const {
    std::string out = schema + "\n";
    std::string current;
    for (const Entry& e : entries) {
        if (e.section != current) {
            out += "\n[" + e.section + "]\n";
            current = e.section;
        }
        out += e.key + " = " + e.value + "\n";
    }
    return out;
}

KvFile KvFile::from_text(const std::string& text, const std::string& origin) {
    KvFile kv;
    std::istringstream in(text);
    std::string line;
    std::string section;
    bool first = true;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string t = trim(line);
        if (first) {
            if (t.empty()) {
                throw ParseError(origin + ": missing schema tag on line 1");
            }
            kv.schema = t;
            first = false;
            continue;
        }
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[') {
            if (t.back() != ']') {
                throw ParseError(origin + ": malformed section header on line " +
                                 std::to_string(lineno));
            }
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos) {
            throw ParseError(origin + ": expected 'key = value' on line " +
                             std::to_string(lineno));
        }
        kv.add(section, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    if (first) {
        throw ParseError(origin + ": empty file");
    }
    return kv;
}

KvFile KvFile::load(const std::filesystem::path& path) {
    return from_text(read_file(path), path.string());
}

void KvFile::save(const std::filesystem::path& path) const {
    write_file(path, to_text());
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open file: " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write file: " + path.string());
    }
    out << content;
    if (!out) {
        throw Error("write failed: " + path.string());
    }
}

std::string bytes_digest(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string file_digest(const std::filesystem::path& path) {
    return bytes_digest(read_file(path));
}

}  // namespace blockid::textio

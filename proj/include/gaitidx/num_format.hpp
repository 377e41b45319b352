#pragma once

#include <charconv>
#include <string>
#include <string_view>
#include <vector>

#include "gaitidx/common.hpp"

namespace gaitidx {

// Shortest decimal form that parses back to the identical double; keeps
// generated files byte-stable across reruns with the same seed.
inline std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s, const std::string& context) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    while (first != last && (*first == ' ' || *first == '\t')) ++first;
    while (last != first && (last[-1] == ' ' || last[-1] == '\t' || last[-1] == '\r')) --last;
    double v = 0.0;
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last) {
        fail(context + ": cannot parse number '" + std::string(s) + "'");
    }
    return v;
}

inline long parse_long(std::string_view s, const std::string& context) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    while (first != last && (*first == ' ' || *first == '\t')) ++first;
    while (last != first && (last[-1] == ' ' || last[-1] == '\t' || last[-1] == '\r')) --last;
    long v = 0;
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last) {
        fail(context + ": cannot parse integer '" + std::string(s) + "'");
    }
    return v;
}

// Splits one CSV line on commas; no quoting (none of our formats needs it).
inline std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> out;
    size_t start = 0;
    while (true) {
        size_t pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

}  // namespace gaitidx

// Copyright 2026 The geo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <cerrno>
#include <complex>
#include <cstdlib>
#include <string>
#include <string_view>
#include <vector>

#include "geo/error.hpp"

namespace geo {

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

/// Whole-string decimal parse; accepts a leading '+'.
inline double parse_double(std::string_view text) {
    const std::string s = trim(text);
    if (s.empty()) throw UsageError("expected a number, got an empty string");
    errno = 0;
    char *end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE) throw UsageError("not a number: '" + s + "'");
    return v;
}

inline std::vector<double> parse_list(std::string_view text) {
    std::vector<double> out;
    if (trim(text).empty()) return out;
    for (const std::string &part : split(text, ',')) out.push_back(parse_double(part));
    return out;
}

/// "0.7071", "0.7071+0i", "0+0.7071i", "-i", "1e-3-2i".
inline std::complex<double> parse_complex(std::string_view text) {
    std::string s = trim(text);
    if (s.empty()) throw UsageError("empty complex literal");
    if (s.back() != 'i') return {parse_double(s), 0.0};
    s.pop_back();
    // split at the last sign that is not part of an exponent and not leading
    std::size_t cut = std::string::npos;
    for (std::size_t i = s.size(); i-- > 1;) {
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
            cut = i;
            break;
        }
    }
    auto imag_of = [](const std::string &t) {
        if (t.empty() || t == "+") return 1.0;
        if (t == "-") return -1.0;
        return parse_double(t);
    };
    if (cut == std::string::npos) return {0.0, imag_of(s)};
    return {parse_double(s.substr(0, cut)), imag_of(s.substr(cut))};
}

}  // namespace geo

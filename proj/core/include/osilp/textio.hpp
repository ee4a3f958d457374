#pragma once
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace osilp {

// Round-trip decimal form for doubles. CSV outputs are byte-compared across
// reruns, so every writer funnels through this one formatter.
inline void put_g17(std::ostream& os, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

}  // namespace osilp

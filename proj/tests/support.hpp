#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#ifndef IOCOH_SOURCE_DIR
#error "IOCOH_SOURCE_DIR must point at the repository root"
#endif

namespace test {

inline std::string repo_path(const std::string& rel) { return std::string(IOCOH_SOURCE_DIR) + "/" + rel; }

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Rows of a headered CSV without comments, fields split on commas.
inline std::vector<std::vector<std::string>> csv_rows(const std::string& path) {
    std::ifstream in(path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::istringstream ss(line);
        std::string item;
        while (std::getline(ss, item, ',')) f.push_back(item);
        rows.push_back(std::move(f));
    }
    return rows;
}

}  // namespace test

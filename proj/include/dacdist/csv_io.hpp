#pragma once

#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dacdist/version.hpp"

namespace dacdist {

/// Shared distribution CSV: header "u,f", one row per grid point, u with 9
/// decimal digits, f with 12 significant digits. The fixed formats make
/// emitted bytes reproducible and read/write round-trips byte-identical.
struct DistributionCsv {
    std::vector<double> u;
    std::vector<double> f;
};

inline std::string format_distribution_csv(std::span<const double> u,
                                           std::span<const double> f) {
    if (u.size() != f.size())
        throw std::invalid_argument("format_distribution_csv: size mismatch");
    std::string out = "u,f\n";
    char line[64];
    for (std::size_t i = 0; i < u.size(); ++i) {
        std::snprintf(line, sizeof(line), "%.9f,%.11e\n", u[i], f[i]);
        out += line;
    }
    return out;
}

inline void write_distribution_csv(const std::string& path,
                                   std::span<const double> u,
                                   std::span<const double> f) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << format_distribution_csv(u, f);
    if (!os) throw std::runtime_error("write failed: " + path);
}

inline DistributionCsv read_distribution_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open: " + path);
    std::string header;
    if (!std::getline(is, header) || header != "u,f")
        throw std::runtime_error("bad distribution CSV header in " + path);
    DistributionCsv csv;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("bad distribution CSV row in " + path);
        csv.u.push_back(std::stod(line.substr(0, comma)));
        csv.f.push_back(std::stod(line.substr(comma + 1)));
    }
    return csv;
}

/// Record of one CLI run: the command, its full parameterization, and the
/// files it wrote. Written next to the outputs as key=value text.
struct RunManifest {
    std::string command;
    std::map<std::string, std::string> parameters;
    std::vector<std::string> output_paths;
    std::string tool_version = kToolVersion;
    std::string timestamp;  // filled at write time when empty
};

inline std::string utc_timestamp() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline void write_manifest(const std::string& path, RunManifest manifest) {
    if (manifest.timestamp.empty()) manifest.timestamp = utc_timestamp();
    std::ostringstream os;
    os << "command=" << manifest.command << '\n'
       << "tool_version=" << manifest.tool_version << '\n'
       << "timestamp=" << manifest.timestamp << '\n';
    for (const auto& [key, value] : manifest.parameters)
        os << "param." << key << '=' << value << '\n';
    for (std::size_t i = 0; i < manifest.output_paths.size(); ++i)
        os << "output." << i << '=' << manifest.output_paths[i] << '\n';
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open for writing: " + path);
    file << os.str();
}

}  // namespace dacdist

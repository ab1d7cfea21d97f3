#pragma once

// Parsing helpers shared by the command-line tool and its tests.

#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "assembly.hpp"
#include "errors.hpp"
#include "surfaces.hpp"

namespace ricciflat::cli {

/// Bad user input; maps to exit code 2.
class UsageError : public Error {
public:
    using Error::Error;
};

/// Unreadable or unwritable file; maps to exit code 3.
class IoError : public Error {
public:
    using Error::Error;
};

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    char* end           = nullptr;
    const double v      = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size()) throw UsageError("invalid number for " + what + ": '" + text + "'");
    return v;
}

inline int parse_int(const std::string& text, const std::string& what) {
    const double v = parse_double(text, what);
    if (v != static_cast<int>(v)) throw UsageError("expected an integer for " + what + ": '" + text + "'");
    return static_cast<int>(v);
}

inline std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

inline std::vector<double> parse_doubles(const std::string& text, std::size_t expected, const std::string& what) {
    const auto parts = split(text, ',');
    if (parts.size() != expected) throw UsageError(what + " expects " + std::to_string(expected) + " comma-separated values");
    std::vector<double> out;
    for (const auto& p : parts) out.push_back(parse_double(p, what));
    return out;
}

inline std::vector<int> parse_signs(const std::string& text) {
    std::vector<int> out;
    for (const auto& p : split(text, ',')) {
        const int v = parse_int(p, "eps_blocks");
        if (v != 1 && v != -1) throw UsageError("eps_blocks entries must be 1 or -1");
        out.push_back(v);
    }
    return out;
}

/// Flat key=value file; '#' starts a comment.
inline std::map<std::string, std::string> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file " + path);
    std::map<std::string, std::string> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
        out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return out;
}

/// --param key=value pairs for catalog surfaces.  The Born-Infeld profile
/// is given by name (sinh, linear, cubic).
inline SurfaceParams parse_surface_params(const std::vector<std::string>& pairs) {
    SurfaceParams out;
    for (const auto& kv : pairs) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw UsageError("--param expects key=value, got '" + kv + "'");
        const std::string key = trim(kv.substr(0, eq));
        const std::string val = trim(kv.substr(eq + 1));
        if (key == "profile") {
            if (val == "sinh") out[key] = 0;
            else if (val == "linear") out[key] = 1;
            else if (val == "cubic") out[key] = 2;
            else throw UsageError("unknown wave profile '" + val + "'");
        } else {
            out[key] = parse_double(val, key);
        }
    }
    return out;
}

/// "scherk,n=2,eps=+-,e0=0.3,m1=1,n1=0.5"; eps is a string of + and - signs.
struct AssembledSpec {
    std::string surface;
    AssemblyConfig config;
};

inline AssembledSpec parse_assembled(const std::string& text) {
    const auto parts = split(text, ',');
    if (parts.empty() || parts[0].empty()) throw UsageError("assembled metric needs a surface name");
    AssembledSpec out;
    out.surface = parts[0];
    std::optional<std::vector<int>> signs;
    for (std::size_t i = 1; i < parts.size(); ++i) {
        const auto eq = parts[i].find('=');
        if (eq == std::string::npos) throw UsageError("assembled: expected key=value, got '" + parts[i] + "'");
        const std::string key = parts[i].substr(0, eq), val = parts[i].substr(eq + 1);
        if (key == "n") out.config.n = parse_int(val, "n");
        else if (key == "e0") out.config.e0 = parse_double(val, "e0");
        else if (key == "m1") out.config.m1 = parse_double(val, "m1");
        else if (key == "n1") out.config.n1 = parse_double(val, "n1");
        else if (key == "eps") {
            std::vector<int> s;
            for (char c : val) {
                if (c == '+') s.push_back(1);
                else if (c == '-') s.push_back(-1);
                else throw UsageError("assembled: eps must be a string of + and -");
            }
            signs = s;
        } else {
            throw UsageError("assembled: unknown key '" + key + "'");
        }
    }
    if (out.config.n < 1) throw UsageError("assembled: n must be positive");
    out.config.eps_blocks = signs.value_or(std::vector<int>(out.config.n, 1));
    if (static_cast<int>(out.config.eps_blocks.size()) != out.config.n)
        throw UsageError("assembled: eps needs one sign per block");
    return out;
}

} // namespace ricciflat::cli

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nclab/expr.hpp"
#include "nclab/spectral.hpp"
#include "nclab/symbol.hpp"

namespace nclab {

/// Config problem tied to a line of the input (line 0: whole file).
class ConfigError : public UsageError {
public:
    ConfigError(std::size_t line, const std::string& msg);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

struct RunConfig {
    // [symbol]
    dsl::SymbolText symbol;
    // [lattice]
    std::int64_t M = 0;
    // [quadrature]
    int Q = 0;  // 0: smallest power of two >= max(64, 4(2M+1))
    int sphere_order = 0;
    int torus_Q = 128;
    // [fit]
    FitOptions fit;
    bool discard_auto = true;
    std::optional<bool> symmetrize;  // unset: on iff the symbol depends on x
    // [check]
    SeminormWindow window{16.0, 4096.0};
    std::vector<std::pair<unsigned, unsigned>> pairs{{0, 0}, {1, 0}, {2, 0}};  // (|α|, |β|) along axis 1
    int torus_points = 16;
    // [output]
    std::string matrix = "discrete";
    bool write_csv = true;
    bool write_binary = true;
};

/// Sectioned key = value text; '#' starts a comment; unknown sections/keys are errors.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Symbol described by the config, regularised at the origin.
Symbol build_symbol(const RunConfig& cfg);

/// Help text for the config grammar.
const char* config_grammar();

}  // namespace nclab

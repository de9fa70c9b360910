#pragma once

#include <string>
#include <string_view>

#include "lvharvest/mc.hpp"
#include "lvharvest/model.hpp"
#include "lvharvest/sde.hpp"

namespace lvharvest {

struct OutputSpec {
    std::string dir;
    bool operator==(const OutputSpec&) const = default;
};

/// Everything a CLI run needs. `ensemble.sim` mirrors `sim`.
struct RunConfig {
    ModelParams model;
    HarvestEffort harvest;
    SimConfig sim;
    EnsembleConfig ensemble;
    OutputSpec output;

    bool operator==(const RunConfig&) const = default;
};

/// Parses a JSON run configuration.
///
/// Schema (unknown keys are rejected):
///   model.r[i], model.alpha[i]: {"constant": c, "harmonics": [{"amp", "k", "phase", "kind"}]}
///                               or {"table": [[t, v], ...]}
///   model.c: [[c11, c12], [c21, c22]]
///   harvest: [h1, h2]
///   sim: {dt, t_end, x0, seed, scheme, record_stride, floor}
///   ensemble: {n_paths, master_seed, burn_in, threads}
///   output: {dir}
///
/// Throws ParseError (with a JSON pointer or line:column) for malformed or
/// unexpected input and ValidationError for physically invalid values.
RunConfig parse_config(std::string_view text);

/// Reads and parses a file; ParseError if it cannot be read.
RunConfig load_config(const std::string& path);

/// Serializes back to the schema accepted by parse_config.
std::string to_json(const RunConfig& cfg, int indent = 2);

}  // namespace lvharvest

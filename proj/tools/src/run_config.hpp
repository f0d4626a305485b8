#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "trirec/eval.hpp"
#include "trirec/groups.hpp"
#include "trirec/ingest.hpp"

namespace trirec::cli {

/// Everything a run needs, resolved from a key=value file plus flag
/// overrides. Keys use snake_case in files and --kebab-case on the command
/// line.
struct RunConfig {
    std::string command;

    std::optional<std::filesystem::path> ratings;
    std::optional<std::filesystem::path> tags;
    std::string format = "custom";
    LoadOptions load;

    ModelSpec model;
    TrainConfig train;
    CvParams cv;

    std::filesystem::path out;
    std::size_t test_fold = 0;
    bool dump_neighbors = false;

    SweepParam sweep_param = SweepParam::lambda;
    std::vector<double> sweep_values;

    std::vector<std::size_t> rating_bins{5, 10, 15, 20, 25, 30, 35, 50, 65};
    std::vector<std::size_t> tag_bins{10, 20, 30, 40, 50, 100};

    /// Keys explicitly set by the file or a flag.
    std::set<std::string> provided;
};

struct KeyInfo {
    std::string name;
    bool is_flag;  ///< boolean switch on the command line
    std::string help;
};

/// All recognised keys in canonical order.
const std::vector<KeyInfo>& known_keys();

using RawConfig = std::map<std::string, std::string>;

/// Parses `key = value` lines; '#' starts a comment. Throws ConfigError for
/// syntax errors or unknown keys, naming the line.
RawConfig read_config_file(const std::filesystem::path& path);

/// Applies file values, then overrides, then validates. Every problem is
/// collected and reported together in one ConfigError.
RunConfig resolve_config(const std::string& command, const RawConfig& file_values, const RawConfig& overrides);

/// Resolved values in canonical key order, excluding keys that cannot
/// change results (output directory, thread count).
ConfigEcho echo(const RunConfig& cfg);

}  // namespace trirec::cli

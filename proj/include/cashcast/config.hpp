#pragma once

#include "cashcast/analysis.hpp"
#include "cashcast/models/forecaster.hpp"
#include "cashcast/policy.hpp"
#include "cashcast/timeseries.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cashcast {

struct ImprovementSpec {
    double from_epsilon = 0.0;
    double to_epsilon = 0.0;
    double cost_per_day = 0.0;
};

struct PipelineConfig {
    std::filesystem::path input;
    std::string dataset_name;
    Variant variant = Variant::Real;

    ModelSpec model;
    /// Candidate specs for a parameter search; empty means use `model` as given.
    std::vector<ModelSpec> grid;

    double g_fraction = 0.65;
    std::size_t horizon = 100;
    std::size_t fold_stride = 1;
    bool fixed_origin = true;

    std::vector<double> risk_levels{0.05, 0.10, 0.15};
    std::vector<CostStructure> cost_structures = cost_scenarios();
    SimulationOptions simulation;

    /// Absolute sigma values; empty means default_sigma_grid.
    std::vector<double> sigma_grid;
    std::vector<ReferenceLine> reference_epsilon;
    std::optional<ImprovementSpec> improvement;

    bool save_model = false;
    std::uint64_t seed = 0;
    std::filesystem::path output_dir = ".";

    /// Training length g = floor(g_fraction * T).
    std::size_t g_for(std::size_t T) const;
};

/// Parses a YAML configuration. Relative paths resolve against `base_dir`.
/// Unknown keys, type mismatches and out-of-range values throw ConfigError naming the key path.
PipelineConfig validate_config(std::string_view text, const std::filesystem::path& base_dir = {});
PipelineConfig load_config(const std::filesystem::path& path);

/// Canonical JSON of every setting that affects results (the output directory is left out).
std::string canonical_config(const PipelineConfig& config);
/// FNV-1a 64-bit hash of canonical_config, as 16 lowercase hex digits.
std::string config_hash(const PipelineConfig& config);

/// `cashcast seed=<seed> config_hash=<hash>`; output files carry it after "# ".
std::string header_line(const PipelineConfig& config);

struct HeaderInfo {
    std::uint64_t seed = 0;
    std::string config_hash;
};

/// Reads the first line of an output file. Returns nothing when it is not a cashcast header.
std::optional<HeaderInfo> parse_header_line(std::string_view line);

/// Seed streams split from the master seed.
enum class SeedStream : std::uint64_t { Variant = 1, Bootstrap = 2, KMedoids = 3, Sweep = 4 };
std::uint64_t sub_seed(std::uint64_t master, SeedStream stream);

}  // namespace cashcast

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "metacovert/config.hpp"

namespace metacovert::app {

inline constexpr const char* kOutputDirEnv = "METACOVERT_OUTPUT_DIR";

enum ExitCode : int { kSuccess = 0, kValidationFailure = 1, kConfigError = 2 };

struct CommandOptions {
    std::optional<std::filesystem::path> out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> samples;
    std::optional<int> workers;
    std::optional<std::vector<double>> eta1;
    std::optional<double> horizon;
    std::optional<config::Range> bandwidth_range;
    std::optional<config::Range> power_range_dbw;
    std::optional<std::vector<std::string>> modulations;
    std::optional<std::vector<config::ChannelSpec>> channels;
};

struct CommandResult {
    int exit_code = kSuccess;
    std::vector<std::filesystem::path> files;
    std::string report;  // human-readable summary for stdout
};

/// "lo:hi:steps"; throws ConfigError naming `flag`.
config::Range parse_range(const std::string& text, const std::string& flag);
/// Comma-separated numbers.
std::vector<double> parse_number_list(const std::string& text, const std::string& flag);
/// Comma-separated names.
std::vector<std::string> parse_name_list(const std::string& text, const std::string& flag);
/// Comma-separated "m:m_s" pairs.
std::vector<config::ChannelSpec> parse_channels(const std::string& text, const std::string& flag);

/// Flag, then the environment variable, then run.output_dir.
std::filesystem::path resolve_output_dir(const config::ScenarioConfig& cfg, const CommandOptions& opts);

/// Copies flag overrides (seed, samples, workers, sweep ranges) into the config.
config::ScenarioConfig apply_overrides(config::ScenarioConfig cfg, const CommandOptions& opts);

CommandResult cmd_advert(const config::ScenarioConfig& cfg, const CommandOptions& opts);
CommandResult cmd_downlink_sweep(const config::ScenarioConfig& cfg, const CommandOptions& opts);
CommandResult cmd_uplink_sweep(const config::ScenarioConfig& cfg, const CommandOptions& opts);
CommandResult cmd_immersion(const config::ScenarioConfig& cfg, const CommandOptions& opts);
CommandResult cmd_validate(const config::ScenarioConfig& cfg, const CommandOptions& opts);
CommandResult cmd_figures(const config::ScenarioConfig& cfg, const CommandOptions& opts);

/// Dispatches by command name and maps exceptions to exit codes; errors go to `err`.
int run_command(const std::string& command, const std::filesystem::path& config_path, const CommandOptions& opts,
                std::string& out, std::string& err);

}  // namespace metacovert::app

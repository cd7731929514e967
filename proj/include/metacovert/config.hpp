#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "metacovert/advertising.hpp"
#include "metacovert/covert_downlink.hpp"
#include "metacovert/uplink.hpp"

namespace metacovert::config {

struct Range {
    double lo = 0.0;
    double hi = 0.0;
    int steps = 2;
};

struct ChannelSpec {
    double m = 1.0;
    double m_s = 2.0;
};

struct UserConfig {
    double mi_min_bps = 1.0;
    double s_k = 1.0;
    std::optional<double> kappa_ak_w;  // overrides downlink.h_ak.mean
    std::optional<double> p_k_w;       // overrides uplink.p_k
    std::optional<std::string> modulation;
};

struct SweepConfig {
    std::vector<double> advert_eta1{2.0, 0.4};
    int advert_steps = 501;
    Range bandwidth_hz{1e5, 1e8, 31};
    std::vector<double> kappa_ak_w{1.0, 3.1622776601683795, 10.0};
    Range power_dbw{-10.0, 30.0, 41};
    std::vector<std::string> modulations{"CBFSK", "CBPSK", "NCBFSK", "DPSK"};
    std::vector<ChannelSpec> channels{{2.0, 3.0}, {3.0, 3.0}, {4.0, 4.0}};
    double target_ber = 1e-5;
};

/// Pass/fail tolerances of the validate command.
struct Tolerances {
    double dep_sigma = 3.0;
    double rate_rel = 0.01;
    double ber_sigma = 3.0;
    double trajectory_abs = 1e-6;
    double j_star_rel = 1e-6;
    double budget_rel = 1e-6;
};

struct RunConfig {
    std::uint64_t seed = 20240601;
    std::int64_t mc_samples = 1'000'000;
    std::string output_dir = "out";
    int workers = 1;
};

struct ScenarioConfig {
    advertising::AdvertParams advertising{};  // bandwidths in MHz
    advertising::AdvertCovertness covertness{};
    downlink::CovertLinkParams downlink{};
    uplink::UplinkParams uplink{};
    std::string modulation = "DPSK";
    std::vector<UserConfig> users{UserConfig{}};
    /// Solve the minimum covert jamming power once per scenario instead of using downlink.p_j.
    bool solve_jammer = true;
    SweepConfig sweeps{};
    Tolerances tolerances{};
    RunConfig run{};
};

/// Defaults of the figure captions plus the documented choices for the rest.
ScenarioConfig default_config();

/// Throws ConfigError whose message starts with the offending field path.
ScenarioConfig parse_config(const nlohmann::json& doc);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Canonical form: every key present, linear units, fixed key order.
nlohmann::json to_json(const ScenarioConfig& cfg);

/// FNV-1a 64 over the canonical serialization, as 16 hex digits.
std::string config_hash(const ScenarioConfig& cfg);

double dbw_to_w(double dbw);
double w_to_dbw(double w);

}  // namespace metacovert::config

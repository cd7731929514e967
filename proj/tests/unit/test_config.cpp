#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "metacovert/config.hpp"
#include "metacovert/errors.hpp"

using namespace metacovert;
using namespace metacovert::config;
using nlohmann::json;

namespace {

std::string error_of(const json& doc) {
    try {
        parse_config(doc);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

}  // namespace

TEST_CASE("empty document gives the defaults") {
    const ScenarioConfig a = parse_config(json::object());
    const ScenarioConfig b = default_config();
    CHECK(to_json(a) == to_json(b));
    CHECK(config_hash(a) == config_hash(b));
    CHECK(a.downlink.p_a == doctest::Approx(10.0).epsilon(1e-14));
    CHECK(a.uplink.sigma2_ka == doctest::Approx(std::pow(10.0, 0.1)).epsilon(1e-14));
    CHECK(a.sweeps.channels.size() == 3);
    CHECK(a.solve_jammer);
}

TEST_CASE("shipped configuration parses") {
    const auto path = std::filesystem::path(METACOVERT_SOURCE_DIR) / "configs" / "default.json";
    const ScenarioConfig cfg = load_config(path);
    CHECK(cfg.users.size() == 3);
    CHECK(cfg.users[2].kappa_ak_w.value() == doctest::Approx(10.0).epsilon(1e-14));
    CHECK(cfg.advertising.b_total == 20.0);
    CHECK(cfg.downlink.h_jw.mean == doctest::Approx(std::sqrt(10.0)).epsilon(1e-14));
}

TEST_CASE("canonical round trip") {
    ScenarioConfig cfg = default_config();
    cfg.run.seed = 99;
    cfg.downlink.delta = 0.05;
    cfg.users.push_back({3e5, 0.7, 2.0, 1.5, std::string("CBPSK")});
    const json canon = to_json(cfg);
    const ScenarioConfig back = parse_config(canon);
    CHECK(to_json(back) == canon);
    CHECK(config_hash(back) == config_hash(cfg));
    CHECK(back.users.back().modulation.value() == "CBPSK");
}

TEST_CASE("unit conversions") {
    CHECK(dbw_to_w(10.0) == doctest::Approx(10.0).epsilon(1e-15));
    CHECK(dbw_to_w(-30.0) == doctest::Approx(1e-3).epsilon(1e-15));
    CHECK(w_to_dbw(100.0) == doctest::Approx(20.0).epsilon(1e-15));
    CHECK_THROWS_AS(w_to_dbw(0.0), DomainError);

    const ScenarioConfig w = parse_config(json::parse(R"({"downlink": {"p_a_w": 2}})"));
    const ScenarioConfig dbm = parse_config(json::parse(R"({"downlink": {"p_a_dbm": 33.010299956639813}})"));
    CHECK(dbm.downlink.p_a == doctest::Approx(w.downlink.p_a).epsilon(1e-12));

    const ScenarioConfig n = parse_config(json::parse(R"({"downlink": {"sigma2_ak_dbm_per_hz": -174}})"));
    CHECK(n.downlink.sigma2_ak_per_hz == doctest::Approx(3.981071705534972e-21).epsilon(1e-12));
}

TEST_CASE("errors name the field path") {
    CHECK(starts_with(error_of(json::parse(R"({"downlink": {"p_a_w": 1, "p_a_dbw": 0}})")), "downlink.p_a"));
    CHECK(starts_with(error_of(json::parse(R"({"downlink": {"delta": 1.5}})")), "downlink.delta"));
    CHECK(starts_with(error_of(json::parse(R"({"downlink": {"h_aw": {"m_s": 1}}})")), "downlink.h_aw.m_s"));
    CHECK(starts_with(error_of(json::parse(R"({"advertising": {"x0": 2}})")), "advertising.x0"));
    CHECK(starts_with(error_of(json::parse(R"({"uplink": {"modulation": "QAM"}})")), "uplink.modulation"));
    CHECK(starts_with(error_of(json::parse(R"({"run": {"mc_samples": 10}})")), "run.mc_samples"));
    CHECK(starts_with(error_of(json::parse(R"({"sweeps": {"power_dbw": {"lo": 5, "hi": 1, "steps": 3}}})")),
                      "sweeps.power_dbw.hi"));
    CHECK(starts_with(error_of(json::parse(R"({"immersion": {"users": [{}, {"s_k": -1}]}})")),
                      "immersion.users[1].s_k"));
    CHECK(error_of(json::parse(R"({"downlnk": {}})")).find("downlnk") != std::string::npos);
    CHECK(error_of(json::parse(R"({"downlink": {"pa_w": 3}})")).find("downlink.pa_w") != std::string::npos);
    CHECK(starts_with(error_of(json::parse(R"({"validation": {"dep_sigma": "three"}})")), "validation.dep_sigma"));
    CHECK_FALSE(error_of(json::array()).empty());
}

TEST_CASE("loading from disk") {
    const auto dir = std::filesystem::temp_directory_path() / "metacovert_config_test";
    std::filesystem::create_directories(dir);
    {
        std::ofstream(dir / "bad.json") << "{ not json";
    }
    CHECK_THROWS_AS(load_config(dir / "bad.json"), ConfigError);
    CHECK_THROWS_AS(load_config(dir / "missing.json"), ConfigError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("hash ignores output location and worker count") {
    ScenarioConfig a = default_config();
    ScenarioConfig b = a;
    b.run.output_dir = "elsewhere";
    b.run.workers = 8;
    CHECK(config_hash(a) == config_hash(b));
    b.run.seed += 1;
    CHECK(config_hash(a) != config_hash(b));
    b = a;
    b.sweeps.target_ber = 1e-6;
    CHECK(config_hash(a) != config_hash(b));
    CHECK(config_hash(a).size() == 16);
}

TEST_CASE("shipped configuration equals the built-in defaults") {
    const auto path = std::filesystem::path(METACOVERT_SOURCE_DIR) / "configs" / "default.json";
    CHECK(config_hash(load_config(path)) == config_hash(default_config()));
}

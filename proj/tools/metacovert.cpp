#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "metacovert/app.hpp"
#include "metacovert/errors.hpp"

namespace app = metacovert::app;

int main(int argc, char** argv) {
    CLI::App cli{"Covert edge access and targeted advertising models"};
    cli.require_subcommand(1);

    std::string config_path;
    std::optional<std::string> out_dir, eta1, bandwidth_range, power_range, modulations, channels;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> samples;
    std::optional<int> workers;
    std::optional<double> horizon;

    const auto common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON scenario config")->required();
        sub->add_option("--out", out_dir, "output directory (overrides " + std::string(app::kOutputDirEnv) + ")");
        sub->add_option("--seed", seed, "master RNG seed");
        sub->add_option("--samples", samples, "Monte Carlo samples");
        sub->add_option("--workers", workers, "Monte Carlo worker threads");
    };

    auto* advert = cli.add_subcommand("advert", "optimal advertising trajectories per eta1");
    common(advert);
    advert->add_option("--eta1", eta1, "comma-separated eta1 values");
    advert->add_option("--horizon", horizon, "planning horizon T1");

    auto* downlink = cli.add_subcommand("downlink-sweep", "covert rate and jamming versus bandwidth");
    common(downlink);
    downlink->add_option("--bandwidth-range", bandwidth_range, "lo:hi:steps in Hz (log grid)");

    auto* uplink = cli.add_subcommand("uplink-sweep", "uplink BER versus transmit power");
    common(uplink);
    uplink->add_option("--power-range-dbw", power_range, "lo:hi:steps in dBW");
    uplink->add_option("--modulations", modulations, "comma-separated: CBFSK,CBPSK,NCBFSK,DPSK");
    uplink->add_option("--channels", channels, "comma-separated m:m_s pairs");

    common(cli.add_subcommand("immersion", "basic bandwidth per user and the resulting horizon"));
    common(cli.add_subcommand("validate", "analytic results against Monte Carlo and ODE oracles"));
    common(cli.add_subcommand("figures", "fig1.csv, fig2.csv, fig3.csv"));

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = cli.exit(e);
        return code == 0 ? 0 : app::kConfigError;
    }

    app::CommandOptions opts;
    try {
        if (out_dir) opts.out_dir = *out_dir;
        opts.seed = seed;
        opts.samples = samples;
        opts.workers = workers;
        opts.horizon = horizon;
        if (eta1) opts.eta1 = app::parse_number_list(*eta1, "--eta1");
        if (bandwidth_range) opts.bandwidth_range = app::parse_range(*bandwidth_range, "--bandwidth-range");
        if (power_range) opts.power_range_dbw = app::parse_range(*power_range, "--power-range-dbw");
        if (modulations) opts.modulations = app::parse_name_list(*modulations, "--modulations");
        if (channels) opts.channels = app::parse_channels(*channels, "--channels");
    } catch (const metacovert::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return app::kConfigError;
    }

    std::string out, err;
    const int code = app::run_command(cli.get_subcommands().front()->get_name(), config_path, opts, out, err);
    std::cout << out;
    std::cerr << err;
    return code;
}

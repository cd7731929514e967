#include "metacovert/app.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "metacovert/advertising.hpp"
#include "metacovert/covert_downlink.hpp"
#include "metacovert/errors.hpp"
#include "metacovert/immersion.hpp"
#include "metacovert/numerics.hpp"
#include "metacovert/oracle.hpp"
#include "metacovert/rng.hpp"
#include "metacovert/sweep.hpp"
#include "metacovert/uplink.hpp"

namespace metacovert::app {
namespace {

using nlohmann::json;
using sweep::format_number;

constexpr numerics::Bracket kJammingBracketW{1e-6, 1e6};
constexpr std::int64_t kMinValidateSamples = 100'000;
constexpr double kValidateBandwidthHz = 1e6;
constexpr int kValidateRk4Steps = 1000;

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) parts.push_back(item);
    if (!text.empty() && text.back() == sep) parts.emplace_back();
    return parts;
}

double parse_double(const std::string& s, const std::string& flag) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(flag + ": '" + s + "' is not a number");
    }
}

sweep::Metadata metadata(const config::ScenarioConfig& cfg) {
    return {config::config_hash(cfg), cfg.run.seed, METACOVERT_VERSION};
}

json metadata_json(const config::ScenarioConfig& cfg) {
    return {{"config_hash", config::config_hash(cfg)}, {"seed", cfg.run.seed}, {"version", METACOVERT_VERSION}};
}

std::vector<double> log_grid(const config::Range& r) {
    std::vector<double> out(static_cast<std::size_t>(r.steps));
    const double span = std::log(r.hi / r.lo);
    for (int i = 0; i < r.steps; ++i) out[i] = r.lo * std::exp(span * i / (r.steps - 1));
    out.front() = r.lo;
    out.back() = r.hi;
    return out;
}

std::vector<double> linear_grid(const config::Range& r) {
    std::vector<double> out(static_cast<std::size_t>(r.steps));
    for (int i = 0; i < r.steps; ++i) out[i] = r.lo + (r.hi - r.lo) * i / (r.steps - 1);
    out.back() = r.hi;
    return out;
}

std::string db_label(double linear) {
    const double db = std::round(config::w_to_dbw(linear) * 1e6) / 1e6;
    return format_number(db == 0.0 ? 0.0 : db) + "dBW";
}

std::string channel_label(const config::ChannelSpec& ch) {
    return "m" + format_number(ch.m) + "_ms" + format_number(ch.m_s);
}

/// NaN when unreachable.
double required_power_dbw(const uplink::UplinkParams& p, const uplink::Modulation& mod, double target) {
    try {
        return config::w_to_dbw(uplink::required_power(p, mod, target));
    } catch (const NoSignChangeError&) {
        return std::nan("");
    }
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// Warden-side solve shared by every bandwidth and user: the warden's statistics
// do not involve B_k or the user channel.
struct JammerSolution {
    bool feasible = false;
    double p_j = 0.0;
    downlink::DetectionOutcome outcome;
    std::string diagnostic;
};

JammerSolution jammer_for(const config::ScenarioConfig& cfg) {
    JammerSolution sol;
    downlink::CovertLinkParams link = cfg.downlink;
    try {
        if (cfg.solve_jammer) link.p_j = downlink::min_jamming_power(link, kJammingBracketW);
        sol.p_j = link.p_j;
        sol.outcome = downlink::optimal_threshold(link);
        sol.feasible = sol.outcome.dep >= 1.0 - link.delta;
        if (!sol.feasible) sol.diagnostic = "configured p_j leaves dep below 1 - delta";
    } catch (const NoSignChangeError& e) {
        sol.diagnostic = e.what();
    }
    return sol;
}

std::vector<immersion::UserRequirement> user_requirements(const config::ScenarioConfig& cfg, double p_j) {
    std::vector<immersion::UserRequirement> reqs;
    for (const auto& u : cfg.users) {
        immersion::UserRequirement r;
        r.mi_min = u.mi_min_bps;
        r.s_k = u.s_k;
        r.downlink = cfg.downlink;
        r.downlink.p_j = p_j;
        if (u.kappa_ak_w) r.downlink.h_ak.mean = *u.kappa_ak_w;
        r.uplink = cfg.uplink;
        if (u.p_k_w) r.uplink.p_k = *u.p_k_w;
        r.modulation = uplink::parse_modulation(u.modulation.value_or(cfg.modulation));
        reqs.push_back(r);
    }
    return reqs;
}

struct BandwidthPlan {
    bool feasible = false;
    std::vector<double> b_k_hz;
    double total_hz = 0.0;
    std::string diagnostic;
    JammerSolution jammer;
};

BandwidthPlan plan_bandwidth(const config::ScenarioConfig& cfg) {
    BandwidthPlan plan;
    plan.jammer = jammer_for(cfg);
    if (!plan.jammer.feasible) {
        plan.diagnostic = "jamming: " + plan.jammer.diagnostic;
        return plan;
    }
    const auto reqs = user_requirements(cfg, plan.jammer.p_j);
    for (std::size_t k = 0; k < reqs.size(); ++k) {
        try {
            const double b = immersion::basic_bandwidth(reqs[k]);
            plan.b_k_hz.push_back(b);
            plan.total_hz += b;
        } catch (const InfeasibleError& e) {
            plan.diagnostic = "user " + std::to_string(k) + ": " + e.what();
            return plan;
        }
    }
    plan.feasible = true;
    return plan;
}

struct AdvertRun {
    advertising::AdvertParams params;
    advertising::CampaignPlan plan;
    advertising::Trajectory trajectory;
};

AdvertRun run_advert(const config::ScenarioConfig& cfg, double eta1, double total_basic_mhz) {
    AdvertRun run;
    run.params = cfg.advertising;
    run.params.eta1 = eta1;
    run.plan = advertising::plan_campaign(run.params, total_basic_mhz);
    run.trajectory = advertising::state_trajectory(run.plan.eq, run.params, run.params.t1, cfg.sweeps.advert_steps);
    return run;
}

json advert_summary(const AdvertRun& run, const config::ScenarioConfig& cfg) {
    const auto& plan = run.plan;
    const auto detect = advertising::advert_detectability(cfg.covertness, run.trajectory.a_star.front());
    json j = {{"eta1", run.params.eta1},
              {"lambda1_bar", plan.eq.lambda1_bar},
              {"x_bar", plan.eq.x_bar},
              {"c2", plan.eq.c2},
              {"j_star", plan.profit.j_star},
              {"total_profit", plan.profit.total_profit},
              {"spend", plan.spend},
              {"budget", run.params.advertising_budget()},
              {"t2", number_or_null(plan.horizon.t2)},
              {"horizon", plan.horizon.horizon},
              {"min_noise_effort", advertising::min_noise_effort(cfg.covertness.delta2, cfg.covertness.j_threshold, 0.0)},
              {"competitor_misjudges_at_t0", detect.miss_detection || detect.false_judgement}};
    if (!plan.horizon.diagnostic.empty()) j["diagnostic"] = plan.horizon.diagnostic;
    return j;
}

sweep::SweepResult downlink_table(const config::ScenarioConfig& cfg, const JammerSolution& jam,
                                  const std::vector<double>& bandwidths, double kappa_ak) {
    sweep::SweepResult t;
    t.independent = "B_hz";
    t.unit = "Hz";
    t.columns = {"B_hz", "covert_rate_bps", "covert_rate_bps_per_hz", "noise_dbm", "p_j_star", "dep_at_opt_threshold",
                 "status"};
    t.metadata = metadata(cfg);
    downlink::CovertLinkParams link = cfg.downlink;
    link.h_ak.mean = kappa_ak;
    link.p_j = jam.p_j;
    for (double b : bandwidths) {
        if (!jam.feasible) {
            const double nan = std::nan("");
            t.add_row({b, nan, nan, downlink::noise_power_dbm(b), nan, nan, std::string("infeasible_jamming")});
            continue;
        }
        const double rate = downlink::ergodic_covert_rate(link, b);
        t.add_row({b, rate, rate / b, downlink::noise_power_dbm(b), jam.p_j, jam.outcome.dep, std::string("ok")});
    }
    return t;
}

struct UplinkColumn {
    std::string name;
    uplink::Modulation mod;
    config::ChannelSpec channel;
};

std::vector<UplinkColumn> uplink_columns(const config::ScenarioConfig& cfg) {
    std::vector<UplinkColumn> cols;
    for (const auto& ch : cfg.sweeps.channels) {
        for (const auto& name : cfg.sweeps.modulations) {
            const auto mod = uplink::parse_modulation(name);
            cols.push_back({"ber_" + uplink::modulation_name(mod.kind) + "_" + channel_label(ch), mod, ch});
        }
    }
    return cols;
}

uplink::UplinkParams with_channel(const config::ScenarioConfig& cfg, const config::ChannelSpec& ch) {
    uplink::UplinkParams p = cfg.uplink;
    p.h_ka.m = ch.m;
    p.h_ka.m_s = ch.m_s;
    return p;
}

sweep::SweepResult uplink_table(const config::ScenarioConfig& cfg) {
    sweep::SweepResult t;
    t.independent = "p_k_dbw";
    t.unit = "dBW";
    t.columns = {"p_k_dbw"};
    t.metadata = metadata(cfg);
    const auto cols = uplink_columns(cfg);
    for (const auto& c : cols) t.columns.push_back(c.name);
    for (double dbw : linear_grid(cfg.sweeps.power_dbw)) {
        std::vector<sweep::Cell> row{dbw};
        for (const auto& c : cols) {
            uplink::UplinkParams p = with_channel(cfg, c.channel);
            p.p_k = config::dbw_to_w(dbw);
            row.emplace_back(uplink::avg_ber(p, c.mod));
        }
        t.add_row(std::move(row));
    }
    return t;
}

json uplink_summary(const config::ScenarioConfig& cfg) {
    json req = json::array();
    for (const auto& c : uplink_columns(cfg)) {
        const double dbw = required_power_dbw(with_channel(cfg, c.channel), c.mod, cfg.sweeps.target_ber);
        req.push_back({{"modulation", uplink::modulation_name(c.mod.kind)},
                       {"m", c.channel.m},
                       {"m_s", c.channel.m_s},
                       {"required_power_dbw", number_or_null(dbw)}});
    }
    return {{"target_ber", cfg.sweeps.target_ber},
            {"kappa_ka", cfg.uplink.h_ka.mean},
            {"sigma2_ka_w", cfg.uplink.sigma2_ka},
            {"required_powers", req},
            {"metadata", metadata_json(cfg)}};
}

sweep::SweepResult fig1_table(const config::ScenarioConfig& cfg, const std::vector<AdvertRun>& runs) {
    sweep::SweepResult t;
    t.independent = "t";
    t.unit = "time";
    t.columns = {"t"};
    t.metadata = metadata(cfg);
    for (const auto& r : runs) {
        const std::string suffix = "_eta1_" + format_number(r.params.eta1);
        for (const char* name : {"x", "a_star", "spend_cum", "g"}) t.columns.push_back(name + suffix);
    }
    const std::size_t n = runs.front().trajectory.size();
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<sweep::Cell> row{runs.front().trajectory.times[i]};
        for (const auto& r : runs) {
            row.emplace_back(r.trajectory.x[i]);
            row.emplace_back(r.trajectory.a_star[i]);
            row.emplace_back(r.trajectory.spend_cum[i]);
            row.emplace_back(r.trajectory.g[i]);
        }
        t.add_row(std::move(row));
    }
    return t;
}

sweep::SweepResult fig2_table(const config::ScenarioConfig& cfg, const JammerSolution& jam) {
    sweep::SweepResult t;
    t.independent = "B_hz";
    t.unit = "Hz";
    t.columns = {"B_hz", "noise_dbm", "p_j_star", "dep_at_opt_threshold"};
    t.metadata = metadata(cfg);
    for (double kappa : cfg.sweeps.kappa_ak_w) {
        t.columns.push_back("covert_rate_bps_kappa_ak_" + db_label(kappa));
    }
    for (double b : log_grid(cfg.sweeps.bandwidth_hz)) {
        const double nan = std::nan("");
        std::vector<sweep::Cell> row{b, downlink::noise_power_dbm(b), jam.feasible ? jam.p_j : nan,
                                     jam.feasible ? jam.outcome.dep : nan};
        for (double kappa : cfg.sweeps.kappa_ak_w) {
            downlink::CovertLinkParams link = cfg.downlink;
            link.h_ak.mean = kappa;
            link.p_j = jam.p_j;
            row.emplace_back(jam.feasible ? downlink::ergodic_covert_rate(link, b) : nan);
        }
        t.add_row(std::move(row));
    }
    return t;
}

struct Check {
    std::string name;
    double analytic = 0.0;
    double oracle = 0.0;
    double discrepancy = 0.0;
    double tolerance = 0.0;
    std::string measure;
    bool pass = false;
};

Check sigma_check(const std::string& name, double analytic, const oracle::McEstimate& mc, double sigmas) {
    Check c{name, analytic, mc.mean, std::abs(analytic - mc.mean), sigmas * mc.std_error, "abs", false};
    c.pass = c.discrepancy <= c.tolerance;
    return c;
}

Check relative_check(const std::string& name, double analytic, double reference, double tol) {
    Check c{name, analytic, reference, std::abs(analytic - reference) / std::abs(reference), tol, "rel", false};
    c.pass = c.discrepancy <= c.tolerance;
    return c;
}

std::vector<Check> run_checks(const config::ScenarioConfig& cfg) {
    const auto& tol = cfg.tolerances;
    std::vector<Check> checks;
    const auto options = [&cfg](std::uint64_t tag) {
        return oracle::McOptions{cfg.run.mc_samples, splitmix64(cfg.run.seed ^ tag), cfg.run.workers};
    };

    const JammerSolution jam = jammer_for(cfg);
    downlink::CovertLinkParams link = cfg.downlink;
    link.p_j = jam.p_j;
    {
        const auto mc = oracle::mc_dep(link, jam.outcome.epsilon, options(1));
        checks.push_back(sigma_check("dep", jam.outcome.dep, mc, tol.dep_sigma));
    }
    {
        const double rate = downlink::ergodic_covert_rate(link, kValidateBandwidthHz);
        const auto mc = oracle::mc_rate(link, kValidateBandwidthHz, options(2));
        checks.push_back(relative_check("rate", rate, mc.mean, tol.rate_rel));
    }
    {
        const auto mod = uplink::parse_modulation(cfg.modulation);
        const double ber = uplink::avg_ber(cfg.uplink, mod);
        const auto mc = oracle::mc_ber(cfg.uplink, mod, options(3));
        checks.push_back(sigma_check("ber", ber, mc, tol.ber_sigma));
    }

    const advertising::AdvertParams& ap = cfg.advertising;
    const advertising::Equilibrium eq = advertising::equilibrium(ap, 0.0);
    {
        const auto rk = oracle::integrate_state(ap, eq, ap.t1, kValidateRk4Steps);
        double worst = 0.0;
        for (std::size_t i = 0; i < rk.trajectory.size(); ++i) {
            worst = std::max(worst, std::abs(rk.trajectory.x[i] - advertising::state_at(eq, ap, rk.trajectory.times[i])));
        }
        Check c{"state_trajectory", 0.0, 0.0, worst, tol.trajectory_abs, "max_abs", false};
        c.pass = worst <= tol.trajectory_abs && !rk.step_warning;
        checks.push_back(c);
    }
    {
        const double closed = advertising::optimal_profit(eq, ap, ap.t1).j_star;
        numerics::QuadratureSpec spec;
        spec.abs_tol = 1e-14;
        spec.rel_tol = 1e-12;
        const double quad = numerics::integrate_interval(
                                [&](double t) {
                                    const double x = std::clamp(advertising::state_at(eq, ap, t), 0.0, 1.0);
                                    const double a = advertising::control_feedback(eq, ap, x);
                                    return ap.pi * x - 0.5 * ap.h_a * a * a;
                                },
                                0.0, ap.t1, spec)
                                .value;
        checks.push_back(relative_check("j_star", closed, quad, tol.j_star_rel));
    }
    {
        // Budget set to half of the unconstrained spend so the multiplier is active.
        advertising::AdvertParams tight = ap;
        const double unconstrained = advertising::ad_spend(eq, ap, ap.t1);
        tight.n_budget = tight.p_l * tight.b_total + 0.5 * unconstrained;
        const auto eq2 = advertising::find_c2(tight, tight.t1);
        const double spend = advertising::ad_spend(eq2, tight, tight.t1);
        const double budget = tight.advertising_budget();
        Check c = relative_check("budget_identity", spend, budget, tol.budget_rel);
        c.pass = c.pass && spend <= budget * (1.0 + tol.budget_rel) && eq2.c2 > 0.0;
        checks.push_back(c);
    }
    return checks;
}

config::Range checked_range(const config::Range& r, const std::string& flag, bool positive) {
    if (positive && !(r.lo > 0.0)) throw ConfigError(flag + ": lo must be > 0");
    if (!(r.hi > r.lo)) throw ConfigError(flag + ": hi must exceed lo");
    if (r.steps < 2) throw ConfigError(flag + ": steps must be >= 2");
    return r;
}

}  // namespace

config::Range parse_range(const std::string& text, const std::string& flag) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw ConfigError(flag + ": expected lo:hi:steps, got '" + text + "'");
    config::Range r;
    r.lo = parse_double(parts[0], flag);
    r.hi = parse_double(parts[1], flag);
    const double steps = parse_double(parts[2], flag);
    if (steps != std::floor(steps) || steps < 2 || steps > 1e6) throw ConfigError(flag + ": steps must be an integer >= 2");
    r.steps = static_cast<int>(steps);
    if (!(r.hi > r.lo)) throw ConfigError(flag + ": hi must exceed lo");
    return r;
}

std::vector<double> parse_number_list(const std::string& text, const std::string& flag) {
    std::vector<double> out;
    for (const auto& part : split(text, ',')) out.push_back(parse_double(part, flag));
    if (out.empty()) throw ConfigError(flag + ": empty list");
    return out;
}

std::vector<std::string> parse_name_list(const std::string& text, const std::string& flag) {
    std::vector<std::string> out;
    for (const auto& part : split(text, ',')) {
        if (part.empty()) throw ConfigError(flag + ": empty name in list");
        out.push_back(part);
    }
    if (out.empty()) throw ConfigError(flag + ": empty list");
    return out;
}

std::vector<config::ChannelSpec> parse_channels(const std::string& text, const std::string& flag) {
    std::vector<config::ChannelSpec> out;
    for (const auto& part : split(text, ',')) {
        const auto mm = split(part, ':');
        if (mm.size() != 2) throw ConfigError(flag + ": expected m:m_s pairs, got '" + part + "'");
        config::ChannelSpec ch{parse_double(mm[0], flag), parse_double(mm[1], flag)};
        if (!(ch.m > 0.0) || !(ch.m_s > 1.0)) throw ConfigError(flag + ": need m > 0 and m_s > 1 in '" + part + "'");
        out.push_back(ch);
    }
    if (out.empty()) throw ConfigError(flag + ": empty list");
    return out;
}

std::filesystem::path resolve_output_dir(const config::ScenarioConfig& cfg, const CommandOptions& opts) {
    if (opts.out_dir) return *opts.out_dir;
    if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
    return cfg.run.output_dir;
}

config::ScenarioConfig apply_overrides(config::ScenarioConfig cfg, const CommandOptions& opts) {
    if (opts.seed) cfg.run.seed = *opts.seed;
    if (opts.samples) {
        if (*opts.samples < oracle::kMinSamples) throw ConfigError("--samples: must be >= 10000");
        cfg.run.mc_samples = *opts.samples;
    }
    if (opts.workers) {
        if (*opts.workers < 1) throw ConfigError("--workers: must be >= 1");
        cfg.run.workers = *opts.workers;
    }
    if (opts.eta1) {
        for (double v : *opts.eta1) {
            if (!(v >= 0.0)) throw ConfigError("--eta1: values must be >= 0");
        }
        cfg.sweeps.advert_eta1 = *opts.eta1;
    }
    if (opts.horizon) {
        if (!(*opts.horizon > 0.0)) throw ConfigError("--horizon: must be > 0");
        cfg.advertising.t1 = *opts.horizon;
    }
    if (opts.bandwidth_range) cfg.sweeps.bandwidth_hz = checked_range(*opts.bandwidth_range, "--bandwidth-range", true);
    if (opts.power_range_dbw) cfg.sweeps.power_dbw = checked_range(*opts.power_range_dbw, "--power-range-dbw", false);
    if (opts.modulations) {
        cfg.sweeps.modulations.clear();
        for (const auto& name : *opts.modulations) {
            try {
                cfg.sweeps.modulations.push_back(uplink::modulation_name(uplink::parse_modulation(name).kind));
            } catch (const DomainError& e) {
                throw ConfigError(std::string("--modulations: ") + e.what());
            }
        }
    }
    if (opts.channels) cfg.sweeps.channels = *opts.channels;
    return cfg;
}

CommandResult cmd_advert(const config::ScenarioConfig& cfg, const CommandOptions& opts) {
    const auto dir = resolve_output_dir(cfg, opts);
    CommandResult result;
    const BandwidthPlan bw = plan_bandwidth(cfg);
    const double total_mhz = bw.feasible ? bw.total_hz * 1e-6 : cfg.advertising.b_total;

    json summary = {{"runs", json::array()},
                    {"total_basic_bandwidth_mhz", total_mhz},
                    {"bandwidth_feasible", bw.feasible},
                    {"metadata", metadata_json(cfg)}};
    if (!bw.feasible) summary["bandwidth_diagnostic"] = bw.diagnostic;
    std::ostringstream report;
    for (double eta1 : cfg.sweeps.advert_eta1) {
        const AdvertRun run = run_advert(cfg, eta1, total_mhz);
        sweep::SweepResult t;
        t.independent = "t";
        t.unit = "time";
        t.columns = {"t", "x", "a_star", "spend_cum", "g"};
        t.metadata = metadata(cfg);
        for (std::size_t i = 0; i < run.trajectory.size(); ++i) {
            t.add_row({run.trajectory.times[i], run.trajectory.x[i], run.trajectory.a_star[i],
                       run.trajectory.spend_cum[i], run.trajectory.g[i]});
        }
        const auto path = dir / ("advert_eta1_" + format_number(eta1) + ".csv");
        sweep::write_csv(path, t);
        result.files.push_back(path);
        summary["runs"].push_back(advert_summary(run, cfg));
        report << "eta1=" << format_number(eta1) << " x_bar=" << format_number(run.plan.eq.x_bar)
               << " c2=" << format_number(run.plan.eq.c2) << " j_star=" << format_number(run.plan.profit.j_star)
               << "\n";
    }
    const auto path = dir / "advert_summary.json";
    sweep::write_json(path, summary);
    result.files.push_back(path);
    result.report = report.str();
    return result;
}

CommandResult cmd_downlink_sweep(const config::ScenarioConfig& cfg, const CommandOptions& opts) {
    const auto dir = resolve_output_dir(cfg, opts);
    CommandResult result;
    const JammerSolution jam = jammer_for(cfg);
    const auto bandwidths = log_grid(cfg.sweeps.bandwidth_hz);
    json files = json::array();
    for (double kappa : cfg.sweeps.kappa_ak_w) {
        const auto path = dir / ("downlink_sweep_kappa_ak_" + db_label(kappa) + ".csv");
        sweep::write_csv(path, downlink_table(cfg, jam, bandwidths, kappa));
        result.files.push_back(path);
        files.push_back(path.filename().string());
    }
    json summary = {{"feasible", jam.feasible},
                    {"p_j_star", number_or_null(jam.feasible ? jam.p_j : std::nan(""))},
                    {"epsilon_star", jam.outcome.epsilon},
                    {"dep_at_opt_threshold", jam.outcome.dep},
                    {"false_alarm", jam.outcome.false_alarm},
                    {"miss_detection", jam.outcome.miss_detection},
                    {"delta", cfg.downlink.delta},
                    {"files", files},
                    {"metadata", metadata_json(cfg)}};
    if (!jam.diagnostic.empty()) summary["diagnostic"] = jam.diagnostic;
    const auto path = dir / "downlink_summary.json";
    sweep::write_json(path, summary);
    result.files.push_back(path);
    result.report = "p_j_star=" + format_number(jam.p_j) + " dep=" + format_number(jam.outcome.dep) +
                    (jam.feasible ? "\n" : " (infeasible: " + jam.diagnostic + ")\n");
    return result;
}

CommandResult cmd_uplink_sweep(const config::ScenarioConfig& cfg, const CommandOptions& opts) {
    const auto dir = resolve_output_dir(cfg, opts);
    CommandResult result;
    auto path = dir / "uplink_sweep.csv";
    sweep::write_csv(path, uplink_table(cfg));
    result.files.push_back(path);
    const json summary = uplink_summary(cfg);
    path = dir / "uplink_summary.json";
    sweep::write_json(path, summary);
    result.files.push_back(path);
    std::ostringstream report;
    for (const auto& r : summary["required_powers"]) {
        report << r["modulation"].get<std::string>() << " m=" << format_number(r["m"].get<double>())
               << " m_s=" << format_number(r["m_s"].get<double>()) << " required_power_dbw="
               << (r["required_power_dbw"].is_null() ? std::string("unreachable")
                                                     : format_number(r["required_power_dbw"].get<double>()))
               << "\n";
    }
    result.report = report.str();
    return result;
}

CommandResult cmd_immersion(const config::ScenarioConfig& cfg, const CommandOptions& opts) {
    const auto dir = resolve_output_dir(cfg, opts);
    CommandResult result;
    const BandwidthPlan bw = plan_bandwidth(cfg);
    json report = {{"feasible", bw.feasible}, {"metadata", metadata_json(cfg)}};
    std::ostringstream text;
    if (!bw.feasible) {
        report["diagnostic"] = bw.diagnostic;
        result.exit_code = kValidationFailure;
        text << "infeasible: " << bw.diagnostic << "\n";
    } else {
        const auto reqs = user_requirements(cfg, bw.jammer.p_j);
        json users = json::array();
        for (std::size_t k = 0; k < reqs.size(); ++k) {
            const double rate = downlink::ergodic_covert_rate(reqs[k].downlink, bw.b_k_hz[k]);
            const double ber = uplink::avg_ber(reqs[k].uplink, reqs[k].modulation);
            users.push_back({{"user", k},
                             {"b_k_hz", bw.b_k_hz[k]},
                             {"mi_min_bps", reqs[k].mi_min},
                             {"meta_immersion", immersion::meta_immersion({rate, ber, reqs[k].s_k})},
                             {"covert_rate_bps", rate},
                             {"uplink_ber", ber}});
            text << "user " << k << " B_k=" << format_number(bw.b_k_hz[k]) << " Hz\n";
        }
        const double total_mhz = bw.total_hz * 1e-6;
        advertising::AdvertParams ap = cfg.advertising;
        const auto plan = advertising::plan_campaign(ap, total_mhz);
        report["p_j_star"] = bw.jammer.p_j;
        report["users"] = users;
        report["total_basic_bandwidth_hz"] = bw.total_hz;
        report["acceleration_bandwidth_mhz"] = ap.b_total - total_mhz;
        report["t2"] = number_or_null(plan.horizon.t2);
        report["horizon"] = plan.horizon.horizon;
        report["c2"] = plan.eq.c2;
        if (!plan.horizon.diagnostic.empty()) report["diagnostic"] = plan.horizon.diagnostic;
        text << "total=" << format_number(bw.total_hz) << " Hz T2=" << format_number(plan.horizon.t2)
             << " T=" << format_number(plan.horizon.horizon) << "\n";
    }
    const auto path = dir / "immersion_report.json";
    sweep::write_json(path, report);
    result.files.push_back(path);
    result.report = text.str();
    return result;
}

CommandResult cmd_validate(const config::ScenarioConfig& cfg, const CommandOptions& opts) {
    if (cfg.run.mc_samples < kMinValidateSamples) throw ConfigError("run.mc_samples: validate needs >= 100000 samples");
    const auto dir = resolve_output_dir(cfg, opts);
    CommandResult result;
    const auto checks = run_checks(cfg);
    json items = json::array();
    std::ostringstream text;
    bool all = true;
    for (const auto& c : checks) {
        all = all && c.pass;
        items.push_back({{"name", c.name},
                         {"analytic", c.analytic},
                         {"oracle", c.oracle},
                         {"discrepancy", c.discrepancy},
                         {"measure", c.measure},
                         {"tolerance", c.tolerance},
                         {"pass", c.pass}});
        text << (c.pass ? "PASS " : "FAIL ") << c.name << " discrepancy=" << format_number(c.discrepancy)
             << " tolerance=" << format_number(c.tolerance) << " (" << c.measure << ")\n";
    }
    const json report = {{"checks", items},
                         {"all_pass", all},
                         {"samples", cfg.run.mc_samples},
                         {"metadata", metadata_json(cfg)}};
    auto path = dir / "validate_report.json";
    sweep::write_json(path, report);
    result.files.push_back(path);
    path = dir / "validate_report.txt";
    sweep::write_text(path, text.str());
    result.files.push_back(path);
    result.report = text.str();
    result.exit_code = all ? kSuccess : kValidationFailure;
    return result;
}

CommandResult cmd_figures(const config::ScenarioConfig& cfg, const CommandOptions& opts) {
    const auto dir = resolve_output_dir(cfg, opts);
    CommandResult result;
    std::vector<AdvertRun> runs;
    for (double eta1 : cfg.sweeps.advert_eta1) {
        AdvertRun run;
        run.params = cfg.advertising;
        run.params.eta1 = eta1;
        run.plan.eq = advertising::find_c2(run.params, run.params.t1);
        run.trajectory = advertising::state_trajectory(run.plan.eq, run.params, run.params.t1, cfg.sweeps.advert_steps);
        runs.push_back(std::move(run));
    }
    auto path = dir / "fig1.csv";
    sweep::write_csv(path, fig1_table(cfg, runs));
    result.files.push_back(path);
    path = dir / "fig2.csv";
    sweep::write_csv(path, fig2_table(cfg, jammer_for(cfg)));
    result.files.push_back(path);
    path = dir / "fig3.csv";
    sweep::write_csv(path, uplink_table(cfg));
    result.files.push_back(path);
    result.report = "wrote fig1.csv fig2.csv fig3.csv to " + dir.string() + "\n";
    return result;
}

int run_command(const std::string& command, const std::filesystem::path& config_path, const CommandOptions& opts,
                std::string& out, std::string& err) {
    try {
        const config::ScenarioConfig cfg = apply_overrides(config::load_config(config_path), opts);
        CommandResult r;
        if (command == "advert") {
            r = cmd_advert(cfg, opts);
        } else if (command == "downlink-sweep") {
            r = cmd_downlink_sweep(cfg, opts);
        } else if (command == "uplink-sweep") {
            r = cmd_uplink_sweep(cfg, opts);
        } else if (command == "immersion") {
            r = cmd_immersion(cfg, opts);
        } else if (command == "validate") {
            r = cmd_validate(cfg, opts);
        } else if (command == "figures") {
            r = cmd_figures(cfg, opts);
        } else {
            err = "unknown command '" + command + "'\n";
            return kConfigError;
        }
        out = r.report;
        return r.exit_code;
    } catch (const ConfigError& e) {
        err = std::string("config error: ") + e.what() + "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        err = std::string("error: ") + e.what() + "\n";
        return kValidationFailure;
    }
}

}  // namespace metacovert::app

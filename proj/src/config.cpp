#include "metacovert/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "metacovert/errors.hpp"

namespace metacovert::config {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw ConfigError(path + ": " + what); }

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

/// Reads one JSON object, tracking consumed keys so typos are reported.
class Section {
public:
    Section(const json& doc, std::string path) : path_(std::move(path)) {
        if (doc.is_null()) return;
        if (!doc.is_object()) fail(path_, "expected an object");
        doc_ = &doc;
    }

    bool has(const std::string& key) const { return doc_ && doc_->contains(key); }
    std::string at(const std::string& key) const { return join(path_, key); }

    const json& raw(const std::string& key) {
        used_.insert(key);
        return (*doc_)[key];
    }

    double number(const std::string& key, double fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_number()) fail(at(key), "expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) fail(at(key), "must be finite");
        return d;
    }

    /// A power given under exactly one of key_w, key_dbw or key_dbm.
    double power(const std::string& key, double fallback_w) {
        const bool w = has(key + "_w"), dbw = has(key + "_dbw"), dbm = has(key + "_dbm");
        if (int(w) + int(dbw) + int(dbm) > 1) fail(at(key), "give only one of _w, _dbw, _dbm");
        if (w) return number(key + "_w", 0.0);
        if (dbw) return dbw_to_w(number(key + "_dbw", 0.0));
        if (dbm) return dbw_to_w(number(key + "_dbm", 0.0) - 30.0);
        return fallback_w;
    }

    /// A dimensionless average gain, linear under `key` or in dB under key_dbw.
    double gain(const std::string& key, double fallback) {
        const bool lin = has(key), db = has(key + "_dbw");
        if (lin && db) fail(at(key), "give only one of linear and _dbw");
        if (db) return dbw_to_w(number(key + "_dbw", 0.0));
        return number(key, fallback);
    }

    std::int64_t integer(const std::string& key, std::int64_t fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_number_integer()) fail(at(key), "expected an integer");
        return v.get<std::int64_t>();
    }

    std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_number_unsigned()) fail(at(key), "expected a non-negative integer");
        return v.get<std::uint64_t>();
    }

    bool boolean(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_boolean()) fail(at(key), "expected true or false");
        return v.get<bool>();
    }

    std::string string(const std::string& key, const std::string& fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_string()) fail(at(key), "expected a string");
        return v.get<std::string>();
    }

    const json& child(const std::string& key) {
        static const json null_json;
        if (!has(key)) return null_json;
        return raw(key);
    }

    void finish() const {
        if (!doc_) return;
        for (const auto& item : doc_->items()) {
            if (!used_.count(item.key())) fail(at(item.key()), "unknown key");
        }
    }

private:
    const json* doc_ = nullptr;
    std::string path_;
    std::set<std::string> used_;
};

void require(bool ok, const std::string& path, const std::string& what) {
    if (!ok) fail(path, what);
}

fading::AlphaMuParams parse_alpha_mu(const json& doc, const std::string& path, fading::AlphaMuParams p) {
    Section s(doc, path);
    p.alpha = s.number("alpha", p.alpha);
    p.mu = s.number("mu", p.mu);
    p.mean = s.gain("mean", p.mean);
    s.finish();
    require(p.alpha > 0.0, join(path, "alpha"), "must be > 0");
    require(p.mu > 0.0, join(path, "mu"), "must be > 0");
    require(p.mean > 0.0, join(path, "mean"), "must be > 0");
    return p;
}

fading::FisherFParams parse_fisher(const json& doc, const std::string& path, fading::FisherFParams p) {
    Section s(doc, path);
    p.m = s.number("m", p.m);
    p.m_s = s.number("m_s", p.m_s);
    p.mean = s.gain("mean", p.mean);
    s.finish();
    require(p.m > 0.0, join(path, "m"), "must be > 0");
    require(p.m_s > 1.0, join(path, "m_s"), "must be > 1");
    require(p.mean > 0.0, join(path, "mean"), "must be > 0");
    return p;
}

Range parse_range(const json& doc, const std::string& path, Range r, bool positive) {
    Section s(doc, path);
    r.lo = s.number("lo", r.lo);
    r.hi = s.number("hi", r.hi);
    r.steps = static_cast<int>(s.integer("steps", r.steps));
    s.finish();
    if (positive) require(r.lo > 0.0, join(path, "lo"), "must be > 0");
    require(r.hi > r.lo, join(path, "hi"), "must exceed lo");
    require(r.steps >= 2, join(path, "steps"), "must be >= 2");
    return r;
}

std::vector<double> parse_number_list(const json& v, const std::string& path) {
    if (!v.is_array() || v.empty()) fail(path, "expected a non-empty array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) fail(path + "[" + std::to_string(i) + "]", "expected a number");
        out.push_back(v[i].get<double>());
    }
    return out;
}

void parse_advertising(const json& doc, ScenarioConfig& cfg) {
    const std::string path = "advertising";
    Section s(doc, path);
    auto& a = cfg.advertising;
    a.pi = s.number("pi", a.pi);
    a.h_a = s.number("h_a", a.h_a);
    a.eta1 = s.number("eta1", a.eta1);
    a.eta2 = s.number("eta2", a.eta2);
    a.x0 = s.number("x0", a.x0);
    a.t1 = s.number("t1", a.t1);
    a.n_budget = s.number("n_budget", a.n_budget);
    a.p_l = s.number("p_l_per_mhz", a.p_l);
    a.b_total = s.number("b_total_mhz", a.b_total);
    a.m_saturation = s.number("m_saturation_mhz", a.m_saturation);
    {
        Section c(s.child("covertness"), join(path, "covertness"));
        auto& cv = cfg.covertness;
        cv.delta1 = c.number("delta1", cv.delta1);
        cv.delta2 = c.number("delta2", cv.delta2);
        cv.j_threshold = c.number("j_threshold", cv.j_threshold);
        cv.noise_effort = c.number("noise_effort", cv.noise_effort);
        c.finish();
        require(cv.delta1 > 0.0, c.at("delta1"), "must be > 0");
        require(cv.delta2 > 0.0, c.at("delta2"), "must be > 0");
        require(cv.j_threshold > 0.0, c.at("j_threshold"), "must be > 0");
        require(cv.noise_effort >= 0.0, c.at("noise_effort"), "must be >= 0");
    }
    s.finish();
    require(a.pi > 0.0, s.at("pi"), "must be > 0");
    require(a.h_a > 0.0, s.at("h_a"), "must be > 0");
    require(a.eta1 >= 0.0, s.at("eta1"), "must be >= 0");
    require(a.eta2 > 0.0, s.at("eta2"), "must be > 0");
    require(a.x0 >= 0.0 && a.x0 <= 1.0, s.at("x0"), "must lie in [0, 1]");
    require(a.t1 > 0.0, s.at("t1"), "must be > 0");
    require(a.n_budget > 0.0, s.at("n_budget"), "must be > 0");
    require(a.p_l >= 0.0, s.at("p_l_per_mhz"), "must be >= 0");
    require(a.b_total >= 0.0, s.at("b_total_mhz"), "must be >= 0");
    require(a.m_saturation > 0.0, s.at("m_saturation_mhz"), "must be > 0");
    require(a.advertising_budget() > 0.0, s.at("n_budget"), "must exceed p_l_per_mhz * b_total_mhz");
}

void parse_downlink(const json& doc, ScenarioConfig& cfg) {
    const std::string path = "downlink";
    Section s(doc, path);
    auto& d = cfg.downlink;
    d.p_a = s.power("p_a", d.p_a);
    d.p_j = s.power("p_j", d.p_j);
    d.sigma2_aw = s.power("sigma2_aw", d.sigma2_aw);
    const bool dbm = s.has("sigma2_ak_dbm_per_hz"), w = s.has("sigma2_ak_w_per_hz");
    if (dbm && w) fail(s.at("sigma2_ak"), "give only one of _w_per_hz and _dbm_per_hz");
    if (dbm) d.sigma2_ak_per_hz = dbw_to_w(s.number("sigma2_ak_dbm_per_hz", 0.0) - 30.0);
    if (w) d.sigma2_ak_per_hz = s.number("sigma2_ak_w_per_hz", 0.0);
    d.delta = s.number("delta", d.delta);
    d.h_jw = parse_alpha_mu(s.child("h_jw"), s.at("h_jw"), d.h_jw);
    d.h_aw = parse_fisher(s.child("h_aw"), s.at("h_aw"), d.h_aw);
    d.h_jk = parse_alpha_mu(s.child("h_jk"), s.at("h_jk"), d.h_jk);
    d.h_ak = parse_fisher(s.child("h_ak"), s.at("h_ak"), d.h_ak);
    cfg.solve_jammer = s.boolean("solve_jammer", cfg.solve_jammer);
    s.finish();
    require(d.p_a >= 0.0, s.at("p_a"), "must be >= 0");
    require(d.p_j >= 0.0, s.at("p_j"), "must be >= 0");
    require(d.sigma2_aw > 0.0, s.at("sigma2_aw"), "must be > 0");
    require(d.sigma2_ak_per_hz > 0.0, s.at("sigma2_ak"), "must be > 0");
    require(d.delta > 0.0 && d.delta < 1.0, s.at("delta"), "must lie in (0, 1)");
}

void parse_uplink(const json& doc, ScenarioConfig& cfg) {
    Section s(doc, "uplink");
    auto& u = cfg.uplink;
    u.p_k = s.power("p_k", u.p_k);
    u.sigma2_ka = s.power("sigma2_ka", u.sigma2_ka);
    u.h_ka = parse_fisher(s.child("h_ka"), s.at("h_ka"), u.h_ka);
    cfg.modulation = s.string("modulation", cfg.modulation);
    s.finish();
    require(u.p_k >= 0.0, s.at("p_k"), "must be >= 0");
    require(u.sigma2_ka > 0.0, s.at("sigma2_ka"), "must be > 0");
    try {
        uplink::parse_modulation(cfg.modulation);
    } catch (const DomainError& e) {
        fail(s.at("modulation"), e.what());
    }
}

void parse_immersion(const json& doc, ScenarioConfig& cfg) {
    Section s(doc, "immersion");
    if (s.has("users")) {
        const json& users = s.raw("users");
        if (!users.is_array() || users.empty()) fail(s.at("users"), "expected a non-empty array");
        cfg.users.clear();
        for (std::size_t i = 0; i < users.size(); ++i) {
            const std::string path = s.at("users") + "[" + std::to_string(i) + "]";
            Section u(users[i], path);
            UserConfig user;
            user.mi_min_bps = u.number("mi_min_bps", user.mi_min_bps);
            user.s_k = u.number("s_k", user.s_k);
            if (u.has("kappa_ak") || u.has("kappa_ak_dbw")) user.kappa_ak_w = u.gain("kappa_ak", 0.0);
            if (u.has("p_k_w") || u.has("p_k_dbw") || u.has("p_k_dbm")) user.p_k_w = u.power("p_k", 0.0);
            if (u.has("modulation")) user.modulation = u.string("modulation", "");
            u.finish();
            require(user.mi_min_bps > 0.0, u.at("mi_min_bps"), "must be > 0");
            require(user.s_k > 0.0, u.at("s_k"), "must be > 0");
            if (user.kappa_ak_w) require(*user.kappa_ak_w > 0.0, u.at("kappa_ak"), "must be > 0");
            if (user.p_k_w) require(*user.p_k_w > 0.0, u.at("p_k"), "must be > 0");
            if (user.modulation) {
                try {
                    uplink::parse_modulation(*user.modulation);
                } catch (const DomainError& e) {
                    fail(u.at("modulation"), e.what());
                }
            }
            cfg.users.push_back(user);
        }
    }
    s.finish();
}

void parse_sweeps(const json& doc, ScenarioConfig& cfg) {
    Section s(doc, "sweeps");
    auto& w = cfg.sweeps;
    if (s.has("advert_eta1")) w.advert_eta1 = parse_number_list(s.raw("advert_eta1"), s.at("advert_eta1"));
    for (std::size_t i = 0; i < w.advert_eta1.size(); ++i) {
        require(w.advert_eta1[i] > 0.0, s.at("advert_eta1") + "[" + std::to_string(i) + "]", "must be > 0");
    }
    w.advert_steps = static_cast<int>(s.integer("advert_steps", w.advert_steps));
    require(w.advert_steps >= 2, s.at("advert_steps"), "must be >= 2");
    w.bandwidth_hz = parse_range(s.child("bandwidth_hz"), s.at("bandwidth_hz"), w.bandwidth_hz, true);
    if (s.has("kappa_ak_dbw")) {
        w.kappa_ak_w.clear();
        for (double db : parse_number_list(s.raw("kappa_ak_dbw"), s.at("kappa_ak_dbw"))) {
            w.kappa_ak_w.push_back(dbw_to_w(db));
        }
    }
    if (s.has("kappa_ak")) {
        if (s.has("kappa_ak_dbw")) fail(s.at("kappa_ak"), "give only one of linear and _dbw");
        w.kappa_ak_w = parse_number_list(s.raw("kappa_ak"), s.at("kappa_ak"));
        for (std::size_t i = 0; i < w.kappa_ak_w.size(); ++i) {
            require(w.kappa_ak_w[i] > 0.0, s.at("kappa_ak") + "[" + std::to_string(i) + "]", "must be > 0");
        }
    }
    w.power_dbw = parse_range(s.child("power_dbw"), s.at("power_dbw"), w.power_dbw, false);
    if (s.has("modulations")) {
        const json& mods = s.raw("modulations");
        if (!mods.is_array() || mods.empty()) fail(s.at("modulations"), "expected a non-empty array of names");
        w.modulations.clear();
        for (std::size_t i = 0; i < mods.size(); ++i) {
            const std::string path = s.at("modulations") + "[" + std::to_string(i) + "]";
            if (!mods[i].is_string()) fail(path, "expected a string");
            try {
                w.modulations.push_back(
                    uplink::modulation_name(uplink::parse_modulation(mods[i].get<std::string>()).kind));
            } catch (const DomainError& e) {
                fail(path, e.what());
            }
        }
    }
    if (s.has("channels")) {
        const json& chans = s.raw("channels");
        if (!chans.is_array() || chans.empty()) fail(s.at("channels"), "expected a non-empty array");
        w.channels.clear();
        for (std::size_t i = 0; i < chans.size(); ++i) {
            const std::string path = s.at("channels") + "[" + std::to_string(i) + "]";
            Section c(chans[i], path);
            ChannelSpec ch;
            ch.m = c.number("m", ch.m);
            ch.m_s = c.number("m_s", ch.m_s);
            c.finish();
            require(ch.m > 0.0, c.at("m"), "must be > 0");
            require(ch.m_s > 1.0, c.at("m_s"), "must be > 1");
            w.channels.push_back(ch);
        }
    }
    w.target_ber = s.number("target_ber", w.target_ber);
    require(w.target_ber > 0.0 && w.target_ber < 0.5, s.at("target_ber"), "must lie in (0, 0.5)");
    s.finish();
}

void parse_tolerances(const json& doc, ScenarioConfig& cfg) {
    Section s(doc, "validation");
    auto& t = cfg.tolerances;
    t.dep_sigma = s.number("dep_sigma", t.dep_sigma);
    t.rate_rel = s.number("rate_rel", t.rate_rel);
    t.ber_sigma = s.number("ber_sigma", t.ber_sigma);
    t.trajectory_abs = s.number("trajectory_abs", t.trajectory_abs);
    t.j_star_rel = s.number("j_star_rel", t.j_star_rel);
    t.budget_rel = s.number("budget_rel", t.budget_rel);
    s.finish();
    const std::pair<const char*, double> fields[] = {{"dep_sigma", t.dep_sigma},       {"rate_rel", t.rate_rel},
                                                     {"ber_sigma", t.ber_sigma},       {"trajectory_abs", t.trajectory_abs},
                                                     {"j_star_rel", t.j_star_rel},     {"budget_rel", t.budget_rel}};
    for (const auto& [key, value] : fields) require(value >= 0.0, s.at(key), "must be >= 0");
}

void parse_run(const json& doc, ScenarioConfig& cfg) {
    Section s(doc, "run");
    auto& r = cfg.run;
    r.seed = s.unsigned_integer("seed", r.seed);
    r.mc_samples = s.integer("mc_samples", r.mc_samples);
    r.output_dir = s.string("output_dir", r.output_dir);
    r.workers = static_cast<int>(s.integer("workers", r.workers));
    s.finish();
    require(r.mc_samples >= 10'000, s.at("mc_samples"), "must be >= 10000");
    require(r.workers >= 1, s.at("workers"), "must be >= 1");
}

json fisher_json(const fading::FisherFParams& p) { return json{{"m", p.m}, {"m_s", p.m_s}, {"mean", p.mean}}; }
json alpha_mu_json(const fading::AlphaMuParams& p) {
    return json{{"alpha", p.alpha}, {"mu", p.mu}, {"mean", p.mean}};
}

}  // namespace

double dbw_to_w(double dbw) { return std::pow(10.0, dbw / 10.0); }
double w_to_dbw(double w) {
    if (!(w > 0.0)) throw DomainError("w_to_dbw: power must be > 0");
    return 10.0 * std::log10(w);
}

ScenarioConfig default_config() {
    ScenarioConfig cfg;
    auto& d = cfg.downlink;
    d.p_a = 10.0;
    d.p_j = 0.0;
    d.sigma2_aw = 0.1;
    d.h_aw = {3.0, 2.0, 1.0};
    d.h_jw = {2.0, 2.0, dbw_to_w(5.0)};
    d.h_ak = {3.0, 2.0, 1.0};
    d.h_jk = {2.0, 2.0, dbw_to_w(5.0)};
    d.delta = 0.03;
    d.sigma2_ak_per_hz = dbw_to_w(-174.0 - 30.0);
    // Jamming effort 5% above the competitor's judgment threshold.
    cfg.covertness.noise_effort = 1.05;
    cfg.uplink.p_k = 1.0;
    cfg.uplink.sigma2_ka = dbw_to_w(1.0);
    cfg.uplink.h_ka = {4.0, 4.0, 10.0};
    cfg.users.clear();
    for (double kappa_dbw : {0.0, 5.0, 10.0}) cfg.users.push_back({2e5, 1.0, dbw_to_w(kappa_dbw), {}, {}});
    return cfg;
}

ScenarioConfig parse_config(const json& doc) {
    if (!doc.is_object()) throw ConfigError("(root): expected a JSON object");
    ScenarioConfig cfg = default_config();
    Section root(doc, "");
    parse_advertising(root.child("advertising"), cfg);
    parse_downlink(root.child("downlink"), cfg);
    parse_uplink(root.child("uplink"), cfg);
    parse_immersion(root.child("immersion"), cfg);
    parse_sweeps(root.child("sweeps"), cfg);
    parse_tolerances(root.child("validation"), cfg);
    parse_run(root.child("run"), cfg);
    root.finish();
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string() + ": cannot open config file");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": invalid JSON: " + e.what());
    }
    return parse_config(doc);
}

json to_json(const ScenarioConfig& cfg) {
    json out;
    const auto& a = cfg.advertising;
    const auto& c = cfg.covertness;
    out["advertising"] = {{"pi", a.pi},
                          {"h_a", a.h_a},
                          {"eta1", a.eta1},
                          {"eta2", a.eta2},
                          {"x0", a.x0},
                          {"t1", a.t1},
                          {"n_budget", a.n_budget},
                          {"p_l_per_mhz", a.p_l},
                          {"b_total_mhz", a.b_total},
                          {"m_saturation_mhz", a.m_saturation},
                          {"covertness",
                           {{"delta1", c.delta1},
                            {"delta2", c.delta2},
                            {"j_threshold", c.j_threshold},
                            {"noise_effort", c.noise_effort}}}};
    const auto& d = cfg.downlink;
    out["downlink"] = {{"p_a_w", d.p_a},
                       {"p_j_w", d.p_j},
                       {"sigma2_aw_w", d.sigma2_aw},
                       {"sigma2_ak_w_per_hz", d.sigma2_ak_per_hz},
                       {"delta", d.delta},
                       {"h_jw", alpha_mu_json(d.h_jw)},
                       {"h_aw", fisher_json(d.h_aw)},
                       {"h_jk", alpha_mu_json(d.h_jk)},
                       {"h_ak", fisher_json(d.h_ak)},
                       {"solve_jammer", cfg.solve_jammer}};
    out["uplink"] = {{"p_k_w", cfg.uplink.p_k},
                     {"sigma2_ka_w", cfg.uplink.sigma2_ka},
                     {"h_ka", fisher_json(cfg.uplink.h_ka)},
                     {"modulation", cfg.modulation}};
    json users = json::array();
    for (const auto& u : cfg.users) {
        json item = {{"mi_min_bps", u.mi_min_bps}, {"s_k", u.s_k}};
        if (u.kappa_ak_w) item["kappa_ak"] = *u.kappa_ak_w;
        if (u.p_k_w) item["p_k_w"] = *u.p_k_w;
        if (u.modulation) item["modulation"] = *u.modulation;
        users.push_back(item);
    }
    out["immersion"] = {{"users", users}};
    const auto& w = cfg.sweeps;
    json channels = json::array();
    for (const auto& ch : w.channels) channels.push_back({{"m", ch.m}, {"m_s", ch.m_s}});
    const auto range = [](const Range& r) { return json{{"lo", r.lo}, {"hi", r.hi}, {"steps", r.steps}}; };
    out["sweeps"] = {{"advert_eta1", w.advert_eta1},
                     {"advert_steps", w.advert_steps},
                     {"bandwidth_hz", range(w.bandwidth_hz)},
                     {"kappa_ak", w.kappa_ak_w},
                     {"power_dbw", range(w.power_dbw)},
                     {"modulations", w.modulations},
                     {"channels", channels},
                     {"target_ber", w.target_ber}};
    const auto& t = cfg.tolerances;
    out["validation"] = {{"dep_sigma", t.dep_sigma},     {"rate_rel", t.rate_rel},
                         {"ber_sigma", t.ber_sigma},     {"trajectory_abs", t.trajectory_abs},
                         {"j_star_rel", t.j_star_rel}, {"budget_rel", t.budget_rel}};
    out["run"] = {{"seed", cfg.run.seed},
                  {"mc_samples", cfg.run.mc_samples},
                  {"output_dir", cfg.run.output_dir},
                  {"workers", cfg.run.workers}};
    return out;
}

std::string config_hash(const ScenarioConfig& cfg) {
    json canonical = to_json(cfg);
    // Output location and parallelism do not change results.
    canonical["run"].erase("output_dir");
    canonical["run"].erase("workers");
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : canonical.dump()) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace metacovert::config

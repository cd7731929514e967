#include "metacovert/covert_downlink.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "metacovert/errors.hpp"

namespace metacovert::downlink {
namespace {

constexpr int kLinearScanPoints = 64;
constexpr int kLogScanPoints = 40;
constexpr double kLogScanDecades = 8.0;
constexpr double kThresholdRelTol = 1e-7;
constexpr double kJammingLogTol = 1e-9;

// CDF of Y1 = p_j |h_jw|^2 at y >= 0.
double jamming_cdf(const CovertLinkParams& p, double y) {
    if (y <= 0.0) return 0.0;
    if (p.p_j == 0.0) return 1.0;
    return fading::alpha_mu_cdf(p.h_jw, y / p.p_j);
}

numerics::QuadratureSpec inner_rate_spec() {
    numerics::QuadratureSpec spec;
    spec.abs_tol = 1e-14;
    spec.rel_tol = 1e-10;
    return spec;
}

}  // namespace

void CovertLinkParams::validate() const {
    const auto bad = [](double v) { return !std::isfinite(v); };
    if (bad(p_a) || p_a < 0.0) throw DomainError("CovertLinkParams: p_a must be >= 0");
    if (bad(p_j) || p_j < 0.0) throw DomainError("CovertLinkParams: p_j must be >= 0");
    if (bad(sigma2_aw) || !(sigma2_aw > 0.0)) throw DomainError("CovertLinkParams: sigma2_aw must be > 0");
    if (bad(sigma2_ak_per_hz) || !(sigma2_ak_per_hz > 0.0)) {
        throw DomainError("CovertLinkParams: sigma2_ak_per_hz must be > 0");
    }
    if (!(delta > 0.0 && delta < 1.0)) throw DomainError("CovertLinkParams: delta must lie in (0, 1)");
    h_jw.validate();
    h_aw.validate();
    h_jk.validate();
    h_ak.validate();
}

double false_alarm_prob(const CovertLinkParams& p, double epsilon) {
    const double y = epsilon - p.sigma2_aw;
    if (y <= 0.0) return 1.0;
    if (p.p_j == 0.0) return 0.0;
    return fading::alpha_mu_ccdf(p.h_jw, y / p.p_j);
}

double miss_detection_prob(const CovertLinkParams& p, double epsilon, const numerics::QuadratureSpec& spec) {
    const double y = epsilon - p.sigma2_aw;
    if (y <= 0.0) return 0.0;
    if (p.p_a == 0.0) return jamming_cdf(p, y);
    if (p.p_j == 0.0) return fading::fisher_f_cdf(p.h_aw, y / p.p_a);

    // Substituting s = t / p_a: F_Y2(y) = ∫_0^{y/p_a} F_Y1(y - p_a s) f_aw(s) ds.
    const numerics::ScalarFunction integrand = [&p, y](double s) {
        const double density = fading::fisher_f_pdf(p.h_aw, s);
        if (density == 0.0) return 0.0;
        return jamming_cdf(p, y - p.p_a * s) * density;
    };
    const double value = numerics::integrate_interval(integrand, 0.0, y / p.p_a, spec).value;
    return std::clamp(value, 0.0, 1.0);
}

DetectionOutcome dep(const CovertLinkParams& p, double epsilon, const numerics::QuadratureSpec& spec) {
    DetectionOutcome out;
    out.epsilon = epsilon;
    out.false_alarm = false_alarm_prob(p, epsilon);
    out.miss_detection = miss_detection_prob(p, epsilon, spec);
    out.dep = out.false_alarm + out.miss_detection;
    return out;
}

double default_threshold_search_hi(const CovertLinkParams& p) {
    return p.sigma2_aw + 20.0 * (p.p_a * p.h_aw.mean + p.p_j * p.h_jw.mean);
}

DetectionOutcome optimal_threshold(const CovertLinkParams& p, double search_hi) {
    const double span = search_hi - p.sigma2_aw;
    if (!(span > 0.0) || !std::isfinite(span)) {
        std::ostringstream msg;
        msg << "optimal_threshold: search_hi must exceed sigma2_aw (got " << search_hi << ")";
        throw DomainError(msg.str());
    }

    // Offsets y = ε - σ²_aw: a linear grid for the bulk plus a log grid for
    // thresholds hugging the noise floor.
    std::vector<double> offsets;
    offsets.reserve(kLinearScanPoints + kLogScanPoints + 1);
    offsets.push_back(0.0);
    for (int i = 1; i <= kLinearScanPoints; ++i) offsets.push_back(span * i / kLinearScanPoints);
    for (int i = 0; i < kLogScanPoints; ++i) {
        offsets.push_back(span * std::pow(10.0, -kLogScanDecades * (1.0 - double(i) / kLogScanPoints)));
    }
    std::sort(offsets.begin(), offsets.end());
    offsets.erase(std::unique(offsets.begin(), offsets.end()), offsets.end());

    const auto dep_at = [&p](double offset) { return dep(p, p.sigma2_aw + offset).dep; };
    std::size_t best = 0;
    double best_value = dep_at(offsets[0]);
    for (std::size_t i = 1; i < offsets.size(); ++i) {
        const double v = dep_at(offsets[i]);
        if (v < best_value) {
            best_value = v;
            best = i;
        }
    }

    const double lo = offsets[best == 0 ? 0 : best - 1];
    const double hi = offsets[std::min(best + 1, offsets.size() - 1)];
    double offset = offsets[best];
    if (hi > lo) {
        const numerics::Minimum refined =
            numerics::minimize_scalar(dep_at, {lo, hi}, kThresholdRelTol * std::max(hi - lo, span * 1e-12));
        if (refined.f <= best_value) offset = refined.x;
    }
    return dep(p, p.sigma2_aw + offset);
}

DetectionOutcome optimal_threshold(const CovertLinkParams& p) {
    // Without a covert signal the two hypotheses coincide and DEP is 1 everywhere.
    if (p.p_a == 0.0) return dep(p, p.sigma2_aw);
    return optimal_threshold(p, default_threshold_search_hi(p));
}

double min_jamming_power(const CovertLinkParams& p, numerics::Bracket bracket) {
    bracket.validate();
    if (bracket.lo < 0.0) throw DomainError("min_jamming_power: bracket.lo must be >= 0");
    const double target = 1.0 - p.delta;
    const auto slack = [&p, target](double p_j) {
        CovertLinkParams trial = p;
        trial.p_j = p_j;
        return optimal_threshold(trial).dep - target;
    };

    if (slack(bracket.lo) >= 0.0) return bracket.lo;
    if (slack(bracket.hi) < 0.0) {
        std::ostringstream msg;
        msg << "min_jamming_power: covertness not reached at p_j = " << bracket.hi << " W";
        throw NoSignChangeError(msg.str());
    }

    numerics::RootResult root;
    if (bracket.lo > 0.0) {
        const auto in_log = [&slack](double log_p) { return slack(std::exp(log_p)); };
        root = numerics::solve_bracketed(in_log, {std::log(bracket.lo), std::log(bracket.hi)}, kJammingLogTol);
        root = {std::exp(root.x), std::exp(root.x_lo), std::exp(root.x_hi), root.iterations};
    } else {
        root = numerics::solve_bracketed(slack, bracket, kJammingLogTol * bracket.hi);
    }
    // The constraint is monotone in p_j, so the upper end of the final bracket is feasible.
    if (slack(root.x) >= 0.0) return root.x;
    return root.x_hi;
}

double ergodic_covert_rate(const CovertLinkParams& p, double bandwidth_hz) {
    if (!(bandwidth_hz >= 0.0)) throw DomainError("ergodic_covert_rate: bandwidth must be >= 0");
    if (bandwidth_hz == 0.0 || p.p_a == 0.0) return 0.0;

    const double noise = bandwidth_hz * p.sigma2_ak_per_hz;
    const numerics::QuadratureSpec inner_spec = inner_rate_spec();
    // E_Z[ln(1 + p_a Z / I)] for interference-plus-noise I.
    const auto inner = [&p, &inner_spec](double interference) {
        const double gain = p.p_a / interference;
        const numerics::ScalarFunction f = [&p, gain](double z) {
            const double density = fading::fisher_f_pdf(p.h_ak, z);
            if (density == 0.0) return 0.0;
            return std::log1p(gain * z) * density;
        };
        return numerics::integrate_semi_infinite(f, inner_spec, p.h_ak.mean).value;
    };

    double nats;
    if (p.p_j == 0.0) {
        nats = inner(noise);
    } else {
        const numerics::ScalarFunction outer = [&p, &inner, noise](double upsilon) {
            const double density = fading::alpha_mu_pdf(p.h_jk, upsilon);
            if (density == 0.0) return 0.0;
            return density * inner(noise + p.p_j * upsilon);
        };
        nats = numerics::integrate_semi_infinite(outer, {}, p.h_jk.mean).value;
    }
    return bandwidth_hz * nats / std::numbers::ln2;
}

double noise_power_dbm(double bandwidth_hz) {
    if (!(bandwidth_hz > 0.0)) throw DomainError("noise_power_dbm: bandwidth must be > 0");
    return -174.0 + 10.0 * std::log10(bandwidth_hz);
}

}  // namespace metacovert::downlink

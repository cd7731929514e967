#include "metacovert/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>
#include <vector>

#include "metacovert/errors.hpp"
#include "metacovert/numerics.hpp"
#include "metacovert/rng.hpp"

namespace metacovert::oracle {
namespace {

struct Moments {
    std::int64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void push(double v) {
        ++n;
        const double d = v - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (v - mean);
    }

    void merge(const Moments& o) {
        if (o.n == 0) return;
        const double total = static_cast<double>(n + o.n);
        const double d = o.mean - mean;
        mean += d * static_cast<double>(o.n) / total;
        m2 += o.m2 + d * d * static_cast<double>(n) * static_cast<double>(o.n) / total;
        n += o.n;
    }
};

// Draws one sample from a stream; called once per sample.
template <class Draw>
McEstimate run_chunked(const McOptions& options, const Draw& draw) {
    options.validate();
    const std::int64_t chunks = (options.samples + kChunkSamples - 1) / kChunkSamples;
    std::vector<Moments> partial(static_cast<std::size_t>(chunks));
    std::atomic<std::int64_t> next{0};

    const auto worker = [&] {
        for (std::int64_t c = next++; c < chunks; c = next++) {
            RandomStream rng = RandomStream::derive(options.seed, static_cast<std::uint64_t>(c));
            const std::int64_t begin = c * kChunkSamples;
            const std::int64_t end = std::min(options.samples, begin + kChunkSamples);
            Moments m;
            for (std::int64_t i = begin; i < end; ++i) m.push(draw(rng));
            partial[static_cast<std::size_t>(c)] = m;
        }
    };

    const int threads = static_cast<int>(std::min<std::int64_t>(options.workers, chunks));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    Moments total;
    for (const auto& m : partial) total.merge(m);
    McEstimate est;
    est.mean = total.mean;
    est.samples = total.n;
    est.seed = options.seed;
    const double var = total.n > 1 ? total.m2 / static_cast<double>(total.n - 1) : 0.0;
    est.std_error = std::sqrt(std::max(var, 0.0) / static_cast<double>(total.n));
    return est;
}

double feedback_rhs(const advertising::AdvertParams& p, const advertising::Equilibrium& eq, double x) {
    const double xc = std::clamp(x, 0.0, 1.0);
    const double a = advertising::control_feedback(eq, p, xc);
    return p.eta1 * a * std::sqrt(1.0 - xc) - p.eta2 * x;
}

double rk4_step(const advertising::AdvertParams& p, const advertising::Equilibrium& eq, double x, double h) {
    const double k1 = feedback_rhs(p, eq, x);
    const double k2 = feedback_rhs(p, eq, x + 0.5 * h * k1);
    const double k3 = feedback_rhs(p, eq, x + 0.5 * h * k2);
    const double k4 = feedback_rhs(p, eq, x + h * k3);
    return x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

void McOptions::validate() const {
    if (samples < kMinSamples) {
        std::ostringstream msg;
        msg << "McOptions: samples must be >= " << kMinSamples;
        throw DomainError(msg.str());
    }
    if (workers < 1) throw DomainError("McOptions: workers must be >= 1");
}

McEstimate mc_dep(const downlink::CovertLinkParams& p, double epsilon, const McOptions& options) {
    p.validate();
    const double fa_level = epsilon - p.sigma2_aw;
    return run_chunked(options, [&p, epsilon, fa_level](RandomStream& rng) {
        const double jam_fa = p.p_j * fading::alpha_mu_sample(p.h_jw, rng);
        const double jam_md = p.p_j * fading::alpha_mu_sample(p.h_jw, rng);
        const double sig = p.p_a * fading::fisher_f_sample(p.h_aw, rng);
        const double fa = jam_fa > fa_level ? 1.0 : 0.0;
        const double md = sig + jam_md + p.sigma2_aw < epsilon ? 1.0 : 0.0;
        return fa + md;
    });
}

McEstimate mc_rate(const downlink::CovertLinkParams& p, double bandwidth_hz, const McOptions& options) {
    p.validate();
    if (!(bandwidth_hz >= 0.0)) throw DomainError("mc_rate: bandwidth must be >= 0");
    if (bandwidth_hz == 0.0) {
        options.validate();
        return {0.0, 0.0, options.samples, options.seed};
    }
    const double noise = bandwidth_hz * p.sigma2_ak_per_hz;
    return run_chunked(options, [&p, bandwidth_hz, noise](RandomStream& rng) {
        const double z = fading::fisher_f_sample(p.h_ak, rng);
        const double jam = p.p_j > 0.0 ? p.p_j * fading::alpha_mu_sample(p.h_jk, rng) : 0.0;
        return bandwidth_hz * std::log1p(p.p_a * z / (noise + jam)) / std::log(2.0);
    });
}

McEstimate mc_ber(const uplink::UplinkParams& p, const uplink::Modulation& mod, const McOptions& options) {
    p.validate();
    if (p.p_k == 0.0) {
        options.validate();
        return {0.5, 0.0, options.samples, options.seed};
    }
    const double snr_scale = p.p_k / p.sigma2_ka;
    return run_chunked(options, [&p, &mod, snr_scale](RandomStream& rng) {
        return uplink::conditional_bep(mod, snr_scale * fading::fisher_f_sample(p.h_ka, rng));
    });
}

StateIntegration integrate_state(const advertising::AdvertParams& p, const advertising::Equilibrium& eq,
                                 double horizon, int steps) {
    if (steps < 100) throw DomainError("integrate_state: steps must be >= 100");
    if (!(horizon > 0.0)) throw DomainError("integrate_state: horizon must be > 0");

    StateIntegration out;
    auto& traj = out.trajectory;
    const auto n = static_cast<std::size_t>(steps) + 1;
    traj.times.resize(n);
    traj.x.resize(n);
    traj.a_star.resize(n);
    traj.spend_cum.resize(n);
    traj.g.resize(n);
    traj.lambda1.assign(n, eq.lambda1_bar);

    const double h = horizon / static_cast<double>(steps);
    const double budget = p.advertising_budget();
    double x = p.x0;
    for (std::size_t i = 0; i < n; ++i) {
        traj.times[i] = horizon * static_cast<double>(i) / static_cast<double>(steps);
        traj.x[i] = x;
        traj.a_star[i] = advertising::control_feedback(eq, p, std::clamp(x, 0.0, 1.0));
        const double rate = 0.5 * p.h_a * traj.a_star[i] * traj.a_star[i];
        if (i == 0) {
            traj.spend_cum[i] = 0.0;
        } else {
            const double prev = 0.5 * p.h_a * traj.a_star[i - 1] * traj.a_star[i - 1];
            traj.spend_cum[i] = traj.spend_cum[i - 1] + 0.5 * h * (rate + prev);
        }
        traj.g[i] = budget - traj.spend_cum[i];
        if (i + 1 == n) break;

        const double full = rk4_step(p, eq, x, h);
        const double half = rk4_step(p, eq, rk4_step(p, eq, x, 0.5 * h), 0.5 * h);
        out.max_local_error = std::max(out.max_local_error, std::abs(half - full) / 15.0);
        x = full;
    }
    if (out.max_local_error > kLocalErrorWarning) {
        out.step_warning = true;
        std::ostringstream msg;
        msg << "integrate_state: local error estimate " << out.max_local_error << " exceeds " << kLocalErrorWarning
            << "; increase steps";
        out.warning = msg.str();
    }
    return out;
}

FixedPointResiduals fixed_point_residuals(const advertising::AdvertParams& p, const advertising::Equilibrium& eq) {
    const double x = eq.x_bar;
    const double a = advertising::control_feedback(eq, p, x);
    const double root = std::sqrt(1.0 - x);
    FixedPointResiduals r;
    r.state = p.eta1 * a * root - p.eta2 * x;
    r.adjoint = -p.pi + eq.lambda1_bar * (p.eta1 * a / (2.0 * root) + p.eta2);
    r.control = eq.lambda1_bar * p.eta1 * root - (1.0 + eq.c2) * p.h_a * a;
    return r;
}

}  // namespace metacovert::oracle

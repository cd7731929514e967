#include "metacovert/advertising.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "metacovert/errors.hpp"
#include "metacovert/numerics.hpp"

namespace metacovert::advertising {
namespace {

constexpr int kMaxBracketDoublings = 200;

numerics::QuadratureSpec spend_spec() {
    numerics::QuadratureSpec spec;
    spec.abs_tol = 1e-14;
    spec.rel_tol = 1e-12;
    return spec;
}

// ∫_0^T x(t) dt for the closed-form path.
double integrated_state(const Equilibrium& eq, const AdvertParams& p, double horizon) {
    const double k = eq.decay_rate(p);
    return eq.x_bar * horizon - (p.x0 - eq.x_bar) * std::expm1(-k * horizon) / k;
}

}  // namespace

void AdvertParams::validate() const {
    const auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
    if (!positive(pi)) throw DomainError("AdvertParams: pi must be > 0");
    if (!positive(h_a)) throw DomainError("AdvertParams: h_a must be > 0");
    if (!(eta1 >= 0.0 && std::isfinite(eta1))) throw DomainError("AdvertParams: eta1 must be >= 0");
    if (!positive(eta2)) throw DomainError("AdvertParams: eta2 must be > 0");
    if (!(x0 >= 0.0 && x0 <= 1.0)) throw DomainError("AdvertParams: x0 must lie in [0, 1]");
    if (!positive(t1)) throw DomainError("AdvertParams: t1 must be > 0");
    if (!positive(n_budget)) throw DomainError("AdvertParams: n_budget must be > 0");
    if (!(p_l >= 0.0)) throw DomainError("AdvertParams: p_l must be >= 0");
    if (!(b_total >= 0.0)) throw DomainError("AdvertParams: b_total must be >= 0");
    if (!positive(m_saturation)) throw DomainError("AdvertParams: m_saturation must be > 0");
    if (!(advertising_budget() > 0.0)) throw DomainError("AdvertParams: n_budget - p_l * b_total must be > 0");
}

void AdvertCovertness::validate() const {
    if (!(delta1 > 0.0) || !(delta2 > 0.0) || !(j_threshold > 0.0) || !(noise_effort >= 0.0)) {
        throw DomainError("AdvertCovertness: delta1, delta2, j must be > 0 and noise effort >= 0");
    }
}

Equilibrium equilibrium(const AdvertParams& p, double c2) {
    if (!(c2 >= 0.0)) throw DomainError("equilibrium: C2 must be >= 0");
    const double weighted_cost = (1.0 + c2) * p.h_a;
    const double eta1_sq = p.eta1 * p.eta1;
    // Rationalized root of λ² η1² / (2 (1+C2) h_a) + η2 λ - π = 0; stable as η1 -> 0.
    const double lambda1 = 2.0 * p.pi / (p.eta2 + std::sqrt(p.eta2 * p.eta2 + 2.0 * p.pi * eta1_sq / weighted_cost));
    Equilibrium eq;
    eq.c2 = c2;
    eq.lambda1_bar = lambda1;
    eq.capital_lambda = lambda1 * eta1_sq / weighted_cost;
    eq.x_bar = lambda1 * eta1_sq / (lambda1 * eta1_sq + p.eta2 * weighted_cost);
    return eq;
}

double control_feedback(const Equilibrium& eq, const AdvertParams& p, double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("control_feedback: x must lie in [0, 1]");
    return eq.lambda1_bar * p.eta1 * std::sqrt(1.0 - x) / ((1.0 + eq.c2) * p.h_a);
}

double hamiltonian(const Equilibrium& eq, const AdvertParams& p, double x, double a) {
    const double cost = 0.5 * p.h_a * a * a;
    return p.pi * x + eq.lambda1_bar * (p.eta1 * a * std::sqrt(1.0 - x) - p.eta2 * x) - cost - eq.c2 * cost;
}

double state_at(const Equilibrium& eq, const AdvertParams& p, double t) {
    return (p.x0 - eq.x_bar) * std::exp(-eq.decay_rate(p) * t) + eq.x_bar;
}

Trajectory state_trajectory(const Equilibrium& eq, const AdvertParams& p, double horizon, int steps) {
    if (!(horizon > 0.0)) throw DomainError("state_trajectory: horizon must be > 0");
    if (steps < 2) throw DomainError("state_trajectory: steps must be >= 2");
    Trajectory traj;
    const auto n = static_cast<std::size_t>(steps);
    traj.times.resize(n);
    traj.x.resize(n);
    traj.a_star.resize(n);
    traj.spend_cum.resize(n);
    traj.g.resize(n);
    traj.lambda1.assign(n, eq.lambda1_bar);

    const double budget = p.advertising_budget();
    double previous_rate = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = horizon * static_cast<double>(i) / static_cast<double>(n - 1);
        const double x = std::clamp(state_at(eq, p, t), 0.0, 1.0);
        const double a = control_feedback(eq, p, x);
        const double rate = 0.5 * p.h_a * a * a;
        traj.times[i] = t;
        traj.x[i] = x;
        traj.a_star[i] = a;
        traj.spend_cum[i] = i == 0 ? 0.0 : traj.spend_cum[i - 1] + 0.5 * (t - traj.times[i - 1]) * (rate + previous_rate);
        traj.g[i] = budget - traj.spend_cum[i];
        previous_rate = rate;
    }
    return traj;
}

double ad_spend(const Equilibrium& eq, const AdvertParams& p, double horizon) {
    if (!(horizon >= 0.0)) throw DomainError("ad_spend: horizon must be >= 0");
    if (horizon == 0.0) return 0.0;
    const numerics::ScalarFunction rate = [&eq, &p](double t) {
        const double a = control_feedback(eq, p, std::clamp(state_at(eq, p, t), 0.0, 1.0));
        return 0.5 * p.h_a * a * a;
    };
    return numerics::integrate_interval(rate, 0.0, horizon, spend_spec()).value;
}

double c2_bound_hint(const Equilibrium& eq, const AdvertParams& p, double horizon) {
    const double lam = eq.capital_lambda;
    const double numerator =
        horizon * eq.lambda1_bar * lam +
        eq.lambda1_bar * eq.x_bar * (lam * horizon - (p.x0 - eq.x_bar) * std::expm1(-eq.decay_rate(p) * horizon));
    return std::max(0.0, numerator / (2.0 * p.advertising_budget()) - 1.0);
}

Equilibrium find_c2(const AdvertParams& p, double horizon) {
    const double budget = p.advertising_budget();
    if (!(budget > 0.0)) throw InfeasibleError("find_c2: advertising budget N - p_l B_T must be > 0");
    if (!(horizon > 0.0)) throw DomainError("find_c2: horizon must be > 0");

    const Equilibrium unconstrained = equilibrium(p, 0.0);
    if (ad_spend(unconstrained, p, horizon) <= budget) return unconstrained;

    const auto excess = [&p, horizon, budget](double c2) { return ad_spend(equilibrium(p, c2), p, horizon) - budget; };
    double hi = std::max(1.0, c2_bound_hint(unconstrained, p, horizon));
    int doublings = 0;
    while (excess(hi) > 0.0) {
        if (++doublings > kMaxBracketDoublings) throw InfeasibleError("find_c2: no multiplier brings spend within budget");
        hi *= 2.0;
    }
    const numerics::RootResult root = numerics::solve_bracketed(excess, {0.0, hi}, 1e-13 * hi);
    // Spend decreases in C2: the upper end of the final bracket is within budget.
    const double c2 = excess(root.x) <= 0.0 ? root.x : root.x_hi;
    return equilibrium(p, c2);
}

Profit optimal_profit(const Equilibrium& eq, const AdvertParams& p, double horizon) {
    if (!(horizon >= 0.0)) throw DomainError("optimal_profit: horizon must be >= 0");
    const double cost_coeff = eq.capital_lambda * eq.lambda1_bar / (2.0 * (1.0 + eq.c2));
    Profit out;
    out.j_star = (p.pi + cost_coeff) * integrated_state(eq, p, horizon) - cost_coeff * horizon;
    out.total_profit = out.j_star - p.p_l * p.b_total;
    return out;
}

double j_star_printed_integral_form(const Equilibrium& eq, const AdvertParams& p, double horizon) {
    const double q = 0.5 * eq.lambda1_bar * eq.lambda1_bar * p.eta1 * p.eta1 / (eq.c2 * eq.c2 * p.h_a + p.h_a);
    return (p.pi + q) * integrated_state(eq, p, horizon) - q * horizon;
}

HorizonResult solve_t2(const Equilibrium& eq, const AdvertParams& p, double total_basic_bw, double horizon_hint) {
    HorizonResult out;
    const double k = eq.decay_rate(p);
    // Bound multiplied through by x̄: x̄ T - ((x0 - x̄)/k) e^(-kT) <= (B_T - ΣB_k)/M - (x0 - x̄)/k.
    const auto lhs = [&eq, &p, k](double t) { return eq.x_bar * t - (p.x0 - eq.x_bar) / k * std::exp(-k * t); };
    const double rhs = (p.b_total - total_basic_bw) / p.m_saturation - (p.x0 - eq.x_bar) / k;

    if (lhs(0.0) > rhs) {
        std::ostringstream msg;
        msg << "basic bandwidth " << total_basic_bw << " exceeds purchased bandwidth " << p.b_total
            << "; no acceleration bandwidth to sell";
        out.diagnostic = msg.str();
        return out;
    }
    if (lhs(0.0) == rhs) return out;

    double hi = std::max(horizon_hint, 1.0);
    int doublings = 0;
    while (lhs(hi) < rhs) {
        if (++doublings > kMaxBracketDoublings) {
            out.t2 = std::numeric_limits<double>::infinity();
            out.horizon = p.t1;
            return out;
        }
        hi *= 2.0;
    }
    const numerics::RootResult root =
        numerics::solve_bracketed([&lhs, rhs](double t) { return lhs(t) - rhs; }, {0.0, hi}, 1e-13 * hi);
    out.t2 = lhs(root.x) <= rhs ? root.x : root.x_lo;
    out.horizon = std::min(p.t1, out.t2);
    return out;
}

CampaignPlan plan_campaign(const AdvertParams& p, double total_basic_bw) {
    p.validate();
    if (!(total_basic_bw >= 0.0)) throw DomainError("plan_campaign: total basic bandwidth must be >= 0");
    CampaignPlan plan;
    double horizon = p.t1;
    constexpr int kMaxIterations = 100;
    for (plan.iterations = 1; plan.iterations <= kMaxIterations; ++plan.iterations) {
        plan.eq = horizon > 0.0 ? find_c2(p, horizon) : equilibrium(p, 0.0);
        plan.horizon = solve_t2(plan.eq, p, total_basic_bw, p.t1);
        const double next = plan.horizon.horizon;
        if (std::abs(next - horizon) <= 1e-12 * std::max(1.0, horizon)) break;
        horizon = next;
    }
    if (plan.iterations > kMaxIterations) throw MaxIterationsError("plan_campaign: C2 / T2 iteration did not settle");
    const double t = plan.horizon.horizon;
    plan.profit = optimal_profit(plan.eq, p, t);
    plan.spend = ad_spend(plan.eq, p, t);
    return plan;
}

Detectability advert_detectability(const AdvertCovertness& c, double actual_effort) {
    Detectability d;
    d.miss_detection = c.delta1 * actual_effort + c.delta2 * c.noise_effort < c.j_threshold;
    d.false_judgement = c.delta2 * c.noise_effort > c.j_threshold;
    return d;
}

double min_noise_effort(double delta2, double j_threshold, double margin) {
    if (!(delta2 > 0.0)) throw DomainError("min_noise_effort: delta2 must be > 0");
    if (!(margin >= 0.0)) throw DomainError("min_noise_effort: margin must be >= 0");
    return j_threshold / delta2 * (1.0 + margin);
}

}  // namespace metacovert::advertising

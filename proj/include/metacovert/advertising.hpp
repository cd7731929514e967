#pragma once

#include <string>
#include <vector>

namespace metacovert::advertising {

/// Economics of the acceleration-bandwidth market under Vidale-Wolfe dynamics
/// dx/dt = η1 a √(1 - x) - η2 x, with x = B(t)/M the normalized sales level.
struct AdvertParams {
    double pi = 10.0;           // revenue rate at x = 1
    double h_a = 3.0;           // quadratic advertising cost coefficient
    double eta1 = 2.0;          // response constant c1 / M
    double eta2 = 1.3;          // decay constant
    double x0 = 0.3;
    double t1 = 5.0;            // planning horizon
    double n_budget = 20.0;     // total budget N
    double p_l = 0.4;           // unit bandwidth price
    double b_total = 20.0;      // purchased bandwidth B_T
    double m_saturation = 4.0;  // saturation level M

    /// N - p_l B_T, the money left for advertising.
    double advertising_budget() const { return n_budget - p_l * b_total; }
    /// c1 = η1 M.
    double response_constant() const { return eta1 * m_saturation; }
    void validate() const;
};

/// Long-run stationary pair (λ̄1, x̄) for a given budget multiplier C2.
struct Equilibrium {
    double lambda1_bar = 0.0;
    double x_bar = 0.0;
    double capital_lambda = 0.0;  // Λ = λ̄1 η1² / ((1 + C2) h_a)
    double c2 = 0.0;

    /// Convergence rate of x(t) toward x̄: Λ / x̄ = Λ + η2.
    double decay_rate(const AdvertParams& p) const { return capital_lambda + p.eta2; }
};

struct Trajectory {
    std::vector<double> times;
    std::vector<double> x;
    std::vector<double> a_star;
    std::vector<double> spend_cum;
    std::vector<double> g;
    std::vector<double> lambda1;

    std::size_t size() const { return times.size(); }
};

struct AdvertCovertness {
    double delta1 = 1.0;
    double delta2 = 1.0;
    double j_threshold = 1.0;
    double noise_effort = 0.0;

    void validate() const;
};

struct Detectability {
    bool miss_detection = false;
    bool false_judgement = false;
};

struct Profit {
    double j_star = 0.0;
    double total_profit = 0.0;  // J* - p_l B_T
};

struct HorizonResult {
    double t2 = 0.0;
    double horizon = 0.0;    // min(T1, T2)
    std::string diagnostic;  // set when even T2 = 0 breaks the bandwidth bound
};

Equilibrium equilibrium(const AdvertParams& p, double c2);

/// a*(x) = λ̄1 η1 √(1 - x) / ((1 + C2) h_a).
double control_feedback(const Equilibrium& eq, const AdvertParams& p, double x);

/// H = πx + λ1(η1 a √(1-x) - η2 x) - (h_a/2) a² - C2 (h_a/2) a², with λ1 = λ̄1.
double hamiltonian(const Equilibrium& eq, const AdvertParams& p, double x, double a);

/// Closed-form optimal path x(t) = (x0 - x̄) e^(-(Λ/x̄) t) + x̄.
double state_at(const Equilibrium& eq, const AdvertParams& p, double t);

/// Uniform grid of `steps` points on [0, horizon]; spend by cumulative trapezoid.
Trajectory state_trajectory(const Equilibrium& eq, const AdvertParams& p, double horizon, int steps);

/// ∫_0^T (h_a/2) a*(t)² dt by adaptive quadrature.
double ad_spend(const Equilibrium& eq, const AdvertParams& p, double horizon);

/// Budget multiplier: C2 = 0 when the unconstrained spend fits N - p_l B_T,
/// otherwise the C2 > 0 at which the spend equals that budget.
Equilibrium find_c2(const AdvertParams& p, double horizon);

/// Lower bound on C2 from substituting the optimal path into the budget bound.
/// Only used to seed the root bracket.
double c2_bound_hint(const Equilibrium& eq, const AdvertParams& p, double horizon);

Profit optimal_profit(const Equilibrium& eq, const AdvertParams& p, double horizon);

/// J* with the (C2² h_a + h_a) denominators as printed in the proof's integral;
/// coincides with optimal_profit at C2 = 0.
double j_star_printed_integral_form(const Equilibrium& eq, const AdvertParams& p, double horizon);

/// Largest T2 with ∫_0^T2 M x(t) dt + ΣB_k <= B_T, and the effective horizon min(T1, T2).
HorizonResult solve_t2(const Equilibrium& eq, const AdvertParams& p, double total_basic_bw, double horizon_hint);

struct CampaignPlan {
    Equilibrium eq;
    HorizonResult horizon;  // horizon.horizon is the planning horizon actually used
    Profit profit;
    double spend = 0.0;
    int iterations = 0;
};

/// Couples the budget multiplier and the bandwidth horizon: C2 is solved on
/// T = min(T1, T2) and T2 depends on C2, so the pair is iterated to a fixed point.
/// `total_basic_bw` uses the same unit as b_total.
CampaignPlan plan_campaign(const AdvertParams& p, double total_basic_bw);

/// Miss detection iff δ1 a + δ2 e < j; false judgement iff δ2 e > j.
Detectability advert_detectability(const AdvertCovertness& c, double actual_effort);

/// j / δ2 (1 + margin): the noise effort at which the competitor always misjudges.
double min_noise_effort(double delta2, double j_threshold, double margin);

}  // namespace metacovert::advertising

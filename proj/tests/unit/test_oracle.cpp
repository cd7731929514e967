#include <doctest.h>

#include <cmath>

#include "metacovert/errors.hpp"
#include "metacovert/oracle.hpp"

using namespace metacovert;
using namespace metacovert::oracle;

namespace {

downlink::CovertLinkParams warden_example() {
    downlink::CovertLinkParams p;
    p.p_a = 1.0;
    p.p_j = 10.0;
    p.sigma2_aw = 0.1;
    p.h_aw = {3.0, 2.0, 1.0};
    p.h_jw = {2.0, 2.0, 3.162};
    p.h_ak = {3.0, 2.0, 1.0};
    p.h_jk = {2.0, 2.0, 3.162};
    return p;
}

McOptions opts(std::int64_t n, std::uint64_t seed, int workers = 1) {
    McOptions o;
    o.samples = n;
    o.seed = seed;
    o.workers = workers;
    return o;
}

bool identical(const McEstimate& a, const McEstimate& b) {
    return a.mean == b.mean && a.std_error == b.std_error && a.samples == b.samples && a.seed == b.seed;
}

}  // namespace

TEST_CASE("options validation") {
    CHECK_THROWS_AS(opts(kMinSamples - 1, 1).validate(), DomainError);
    CHECK_THROWS_AS(opts(kMinSamples, 1, 0).validate(), DomainError);
    CHECK_NOTHROW(opts(kMinSamples, 1).validate());
    CHECK_THROWS_AS(mc_dep(warden_example(), 5.0, opts(100, 1)), DomainError);
}

TEST_CASE("mc dep") {
    downlink::CovertLinkParams blind = warden_example();
    blind.p_a = 0.0;
    const McEstimate b = mc_dep(blind, 5.0, opts(200000, 3));
    CHECK(std::abs(b.mean - 1.0) <= 3.0 * b.std_error);

    const McEstimate low = mc_dep(warden_example(), 0.1, opts(20000, 3));
    CHECK(low.mean == 1.0);

    const McEstimate e = mc_dep(warden_example(), 5.0, opts(2'000'000, 4, 2));
    const double analytic = downlink::dep(warden_example(), 5.0).dep;
    CHECK(std::abs(e.mean - analytic) <= 3.0 * e.std_error);
    CHECK(e.samples == 2'000'000);
    CHECK(e.seed == 4);
}

TEST_CASE("mc rate") {
    CHECK(mc_rate(warden_example(), 0.0, opts(20000, 1)).mean == 0.0);

    downlink::CovertLinkParams p;
    p.p_a = 1.0;
    p.p_j = 0.0;
    p.sigma2_ak_per_hz = 1.0;
    p.h_ak = {1.0, 2.0, 1.0};
    const McEstimate r = mc_rate(p, 1.0, opts(10'000'000, 5, 4));
    CHECK(std::abs(r.mean - 0.5 / std::log(2.0)) <= 3.0 * r.std_error);

    const McEstimate jammed = mc_rate(warden_example(), 1e6, opts(1'000'000, 6, 2));
    const double analytic = downlink::ergodic_covert_rate(warden_example(), 1e6);
    CHECK(std::abs(jammed.mean - analytic) <= 3.0 * jammed.std_error);
}

TEST_CASE("mc ber") {
    const uplink::Modulation dpsk = uplink::modulation_params(uplink::ModulationKind::DPSK);
    uplink::UplinkParams p;
    p.p_k = 0.0;
    p.sigma2_ka = 1.0;
    p.h_ka = {1.0, 2.0, 1.0};
    CHECK(mc_ber(p, dpsk, opts(20000, 1)).mean == 0.5);

    p.p_k = 1.0;
    const McEstimate e = mc_ber(p, dpsk, opts(10'000'000, 7, 4));
    CHECK(std::abs(e.mean - 0.2981736811615972) <= 3.0 * e.std_error);
}

TEST_CASE("reproducibility and worker independence") {
    const auto p = warden_example();
    const McEstimate one = mc_dep(p, 5.0, opts(300000, 9, 1));
    CHECK(identical(one, mc_dep(p, 5.0, opts(300000, 9, 1))));
    CHECK(identical(one, mc_dep(p, 5.0, opts(300000, 9, 3))));
    CHECK(identical(one, mc_dep(p, 5.0, opts(300000, 9, 8))));
    CHECK_FALSE(one.mean == mc_dep(p, 5.0, opts(300000, 10, 1)).mean);

    const McEstimate r1 = mc_rate(p, 1e6, opts(200000, 9, 1));
    CHECK(identical(r1, mc_rate(p, 1e6, opts(200000, 9, 4))));
}

TEST_CASE("standard error scales as inverse root n") {
    const auto p = warden_example();
    const McEstimate small = mc_dep(p, 5.0, opts(250000, 12));
    const McEstimate large = mc_dep(p, 5.0, opts(1000000, 12));
    const double ratio = small.std_error / large.std_error;
    CHECK(ratio > 2.0 * 0.8);
    CHECK(ratio < 2.0 * 1.2);
}

TEST_CASE("state integration") {
    advertising::AdvertParams p;
    p.eta1 = 0.0;
    const StateIntegration decay = integrate_state(p, advertising::equilibrium(p, 0.0), 5.0, 1000);
    for (std::size_t k = 0; k < decay.trajectory.size(); ++k) {
        CHECK(decay.trajectory.x[k] ==
              doctest::Approx(p.x0 * std::exp(-p.eta2 * decay.trajectory.times[k])).epsilon(1e-10));
    }

    advertising::AdvertParams still;
    const advertising::Equilibrium eq = advertising::equilibrium(still, 0.0);
    still.x0 = eq.x_bar;
    const StateIntegration flat = integrate_state(still, eq, 5.0, 200);
    for (double x : flat.trajectory.x) CHECK(std::abs(x - eq.x_bar) < 1e-14);

    advertising::AdvertParams fig1;
    const advertising::Equilibrium e1 = advertising::equilibrium(fig1, 0.0);
    const StateIntegration ode = integrate_state(fig1, e1, 5.0, 1000);
    CHECK_FALSE(ode.step_warning);
    CHECK(ode.warning.empty());
    for (std::size_t k = 0; k < ode.trajectory.size(); ++k) {
        CHECK(std::abs(ode.trajectory.x[k] - advertising::state_at(e1, fig1, ode.trajectory.times[k])) < 1e-6);
    }

    // A coarse grid on a stiff decay trips the local-error warning.
    advertising::AdvertParams stiff;
    stiff.eta2 = 200.0;
    const StateIntegration coarse = integrate_state(stiff, advertising::equilibrium(stiff, 0.0), 5.0, 100);
    CHECK(coarse.step_warning);
    CHECK(coarse.max_local_error > kLocalErrorWarning);
    CHECK_FALSE(coarse.warning.empty());

    CHECK_THROWS_AS(integrate_state(fig1, e1, 5.0, 99), DomainError);
}

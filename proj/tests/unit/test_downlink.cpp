#include <doctest.h>

#include <cmath>
#include <numbers>

#include "metacovert/covert_downlink.hpp"
#include "metacovert/errors.hpp"
#include "support.hpp"

using namespace metacovert;
using namespace metacovert::downlink;
using testsupport::between;

namespace {

CovertLinkParams example_link() {
    CovertLinkParams p;
    p.p_a = 1.0;
    p.p_j = 10.0;
    p.sigma2_aw = 0.1;
    p.h_aw = {3.0, 2.0, 1.0};
    p.h_jw = {2.0, 2.0, 3.162};
    return p;
}

CovertLinkParams fig2_link() {
    CovertLinkParams p;
    p.p_a = 10.0;
    p.sigma2_aw = 0.1;
    p.h_aw = {3.0, 2.0, 1.0};
    p.h_jw = {2.0, 2.0, std::pow(10.0, 0.5)};
    p.h_ak = {3.0, 2.0, 1.0};
    p.h_jk = {2.0, 2.0, std::pow(10.0, 0.5)};
    p.delta = 0.03;
    return p;
}

CovertLinkParams random_link(RandomStream& rng) {
    CovertLinkParams p;
    p.p_a = std::exp(between(rng, std::log(0.3), std::log(30.0)));
    p.p_j = std::exp(between(rng, std::log(0.3), std::log(100.0)));
    p.sigma2_aw = between(rng, 0.05, 1.0);
    p.h_aw = testsupport::random_fisher(rng);
    p.h_jw = testsupport::random_alpha_mu(rng);
    p.h_ak = testsupport::random_fisher(rng);
    p.h_jk = testsupport::random_alpha_mu(rng);
    return p;
}

}  // namespace

TEST_CASE("false alarm examples") {
    CovertLinkParams p;
    p.p_j = 1.0;
    p.sigma2_aw = 0.1;
    p.h_jw = {2.0, 1.0, 1.0};
    CHECK(false_alarm_prob(p, 0.05) == 1.0);
    CHECK(false_alarm_prob(p, 0.1) == 1.0);
    CHECK(false_alarm_prob(p, 1.1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    p.p_j = 0.0;
    CHECK(false_alarm_prob(p, 0.11) == 0.0);
}

TEST_CASE("miss detection examples") {
    CovertLinkParams p;
    p.p_j = 1.0;
    p.sigma2_aw = 0.1;
    p.h_jw = {2.0, 1.0, 1.0};
    CHECK(miss_detection_prob(p, 0.1) == 0.0);
    CHECK(miss_detection_prob(p, -3.0) == 0.0);
    p.p_a = 0.0;
    CHECK(miss_detection_prob(p, 1.1) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));

    // Frozen from 10^7 Monte Carlo draws: MD = 0.0285975 +- 5.27e-5, FA = 0.9609092 +- 6.13e-5.
    const CovertLinkParams ex = example_link();
    CHECK(std::abs(miss_detection_prob(ex, 5.0) - 0.0285975) <= 3.0 * 5.27e-5);
    CHECK(std::abs(false_alarm_prob(ex, 5.0) - 0.9609092) <= 3.0 * 6.13e-5);
}

TEST_CASE("dep sums its components") {
    const CovertLinkParams ex = example_link();
    const DetectionOutcome d = dep(ex, 5.0);
    CHECK(d.dep == d.false_alarm + d.miss_detection);
    CHECK(d.epsilon == 5.0);
    // Independent scipy quadrature of the same integrals.
    CHECK(d.dep == doctest::Approx(0.989476977072682).epsilon(1e-8));
    // 10^7-sample Monte Carlo: 0.9895067 +- 3.22e-5.
    CHECK(std::abs(d.dep - 0.9895067) <= 3.0 * 3.22e-5);

    const DetectionOutcome low = dep(ex, 0.05);
    CHECK(low.false_alarm == 1.0);
    CHECK(low.miss_detection == 0.0);
    CHECK(low.dep == 1.0);

    CovertLinkParams blind = ex;
    blind.p_a = 0.0;
    for (double eps : {0.2, 1.0, 5.0, 40.0}) CHECK(dep(blind, eps).dep == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("FA nonincreasing and MD nondecreasing in the threshold") {
    RandomStream rng(41);
    for (int set = 0; set < 20; ++set) {
        const CovertLinkParams p = random_link(rng);
        const double hi = default_threshold_search_hi(p);
        double fa_prev = 2.0, md_prev = -1.0;
        for (int i = 0; i < 50; ++i) {
            const double eps = p.sigma2_aw + (hi - p.sigma2_aw) * std::pow(i / 49.0, 2.0);
            const DetectionOutcome d = dep(p, eps);
            CHECK(d.false_alarm >= 0.0);
            CHECK(d.false_alarm <= 1.0);
            CHECK(d.miss_detection >= 0.0);
            CHECK(d.miss_detection <= 1.0);
            CHECK(d.false_alarm <= fa_prev + 1e-12);
            CHECK(d.miss_detection >= md_prev - 1e-12);
            fa_prev = d.false_alarm;
            md_prev = d.miss_detection;
        }
    }
}

TEST_CASE("optimal threshold") {
    CovertLinkParams blind = example_link();
    blind.p_a = 0.0;
    CHECK(optimal_threshold(blind).dep == doctest::Approx(1.0).epsilon(1e-12));

    // Heavy jamming masks the signal; nested Monte Carlo minimum 0.9997776.
    CovertLinkParams heavy = example_link();
    heavy.p_j = 1e3 * heavy.p_a;
    const DetectionOutcome masked = optimal_threshold(heavy);
    CHECK(masked.dep >= 0.99);
    CHECK(std::abs(masked.dep - 0.9997776) < 1e-3);

    // No jamming, strong tight signal: the warden detects almost surely.
    CovertLinkParams open;
    open.p_a = 100.0;
    open.p_j = 0.0;
    open.sigma2_aw = 0.1;
    open.h_aw = {10.0, 20.0, 1.0};
    CHECK(optimal_threshold(open).dep < 1e-6);

    RandomStream rng(42);
    for (int set = 0; set < 10; ++set) {
        const CovertLinkParams p = random_link(rng);
        const DetectionOutcome best = optimal_threshold(p);
        CHECK(best.dep <= 1.0);
        CHECK(best.epsilon >= p.sigma2_aw);
        // Never beaten by a coarse scan.
        const double hi = default_threshold_search_hi(p);
        for (int i = 0; i <= 40; ++i) {
            CHECK(best.dep <= dep(p, p.sigma2_aw + (hi - p.sigma2_aw) * i / 40.0).dep + 1e-9);
        }
    }
    CHECK_THROWS_AS(optimal_threshold(example_link(), 0.05), DomainError);
}

TEST_CASE("minimum jamming power") {
    const CovertLinkParams p = fig2_link();
    const double pj = min_jamming_power(p, {1e-6, 1e6});
    // Nested Monte Carlo / bisection oracle: 71.77584504889433 W.
    CHECK(std::abs(pj - 71.77584504889433) <= 0.02 * 71.77584504889433);

    CovertLinkParams at = p;
    at.p_j = pj;
    const double d = optimal_threshold(at).dep;
    CHECK(d >= 0.97);
    CHECK(d <= 0.97 + 1e-3);
    at.p_j = 0.95 * pj;
    CHECK(optimal_threshold(at).dep < 0.97);

    CovertLinkParams lax = p;
    lax.delta = 0.999;
    CHECK(min_jamming_power(lax, {0.5, 100.0}) == 0.5);
    CovertLinkParams silent = p;
    silent.p_a = 0.0;
    CHECK(min_jamming_power(silent, {0.0, 100.0}) == 0.0);
    CHECK_THROWS_AS(min_jamming_power(p, {1e-6, 1.0}), NoSignChangeError);
}

TEST_CASE("ergodic covert rate") {
    CovertLinkParams p;
    p.p_a = 1.0;
    p.p_j = 0.0;
    p.sigma2_ak_per_hz = 1.0;
    p.h_ak = {1.0, 2.0, 1.0};
    CHECK(ergodic_covert_rate(p, 1.0) == doctest::Approx(0.5 / std::numbers::ln2).epsilon(1e-9));
    CHECK(ergodic_covert_rate(p, 0.0) == 0.0);
    CovertLinkParams off = p;
    off.p_a = 0.0;
    CHECK(ergodic_covert_rate(off, 5.0) == 0.0);
    CHECK_THROWS_AS(ergodic_covert_rate(p, -1.0), DomainError);
}

TEST_CASE("covert rate monotonicity") {
    CovertLinkParams p = fig2_link();
    p.p_j = 70.0;
    double prev = 0.0;
    for (double b = 1e4; b <= 1e9; b *= 10.0) {
        const double r = ergodic_covert_rate(p, b);
        CHECK(r >= prev);
        prev = r;
    }
    prev = 0.0;
    for (double pa : {0.1, 1.0, 10.0, 100.0}) {
        CovertLinkParams q = p;
        q.p_a = pa;
        const double r = ergodic_covert_rate(q, 1e6);
        CHECK(r >= prev);
        prev = r;
    }
    prev = INFINITY;
    for (double pj : {0.0, 1.0, 10.0, 100.0}) {
        CovertLinkParams q = p;
        q.p_j = pj;
        const double r = ergodic_covert_rate(q, 1e6);
        CHECK(r <= prev);
        prev = r;
    }
}

TEST_CASE("noise power") {
    CHECK(noise_power_dbm(1.0) == doctest::Approx(-174.0));
    CHECK(noise_power_dbm(1e6) == doctest::Approx(-114.0));
    CHECK(noise_power_dbm(1e8) == doctest::Approx(-94.0));
    CHECK_THROWS_AS(noise_power_dbm(0.0), DomainError);
}

TEST_CASE("parameter validation") {
    CovertLinkParams p = fig2_link();
    CHECK_NOTHROW(p.validate());
    p.delta = 1.0;
    CHECK_THROWS_AS(p.validate(), DomainError);
    p = fig2_link();
    p.sigma2_aw = 0.0;
    CHECK_THROWS_AS(p.validate(), DomainError);
    p = fig2_link();
    p.p_j = -1.0;
    CHECK_THROWS_AS(p.validate(), DomainError);
}

#pragma once

#include "metacovert/fading.hpp"
#include "metacovert/numerics.hpp"

namespace metacovert::downlink {

/// Downlink covert link: EAP -> user k observed by a warden, masked by a friendly jammer.
/// Powers in watts; the user noise is a spectral density in W/Hz.
struct CovertLinkParams {
    double p_a = 10.0;
    double p_j = 0.0;
    double sigma2_aw = 0.1;
    double sigma2_ak_per_hz = 3.981071705534972e-21;  // -174 dBm/Hz
    fading::AlphaMuParams h_jw{};
    fading::FisherFParams h_aw{};
    fading::AlphaMuParams h_jk{};
    fading::FisherFParams h_ak{};
    double delta = 0.03;

    void validate() const;
};

struct DetectionOutcome {
    double false_alarm = 0.0;
    double miss_detection = 0.0;
    double dep = 0.0;  // false_alarm + miss_detection
    double epsilon = 0.0;
};

/// Pr(p_j |h_jw|^2 > ε - σ²_aw).
double false_alarm_prob(const CovertLinkParams& p, double epsilon);

/// Pr(p_a |h_aw|^2 + p_j |h_jw|^2 + σ²_aw < ε), by the convolution
/// F_Y2(y) = ∫_0^y F_Y1(y - t) f_aw(t / p_a) / p_a dt.
double miss_detection_prob(const CovertLinkParams& p, double epsilon,
                           const numerics::QuadratureSpec& spec = {});

DetectionOutcome dep(const CovertLinkParams& p, double epsilon, const numerics::QuadratureSpec& spec = {});

/// σ²_aw + 20 (p_a κ̄_aw + p_j γ̄_jw).
double default_threshold_search_hi(const CovertLinkParams& p);

/// Warden's best threshold on [σ²_aw, search_hi]: a coarse scan locates the
/// basin, golden-section search refines it.
DetectionOutcome optimal_threshold(const CovertLinkParams& p, double search_hi);
DetectionOutcome optimal_threshold(const CovertLinkParams& p);

/// Smallest jamming power in `bracket` whose warden-optimal DEP is at least 1 - δ.
/// The returned power always satisfies the constraint (root taken from the feasible side).
double min_jamming_power(const CovertLinkParams& p, numerics::Bracket bracket);

/// B E[log2(1 + p_a |h_ak|^2 / (B σ²_ak + p_j |h_jk|^2))] in bit/s.
double ergodic_covert_rate(const CovertLinkParams& p, double bandwidth_hz);

/// -174 dBm/Hz thermal noise integrated over the bandwidth.
double noise_power_dbm(double bandwidth_hz);

}  // namespace metacovert::downlink

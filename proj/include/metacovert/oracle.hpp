#pragma once

#include <cstdint>
#include <string>

#include "metacovert/advertising.hpp"
#include "metacovert/covert_downlink.hpp"
#include "metacovert/uplink.hpp"

namespace metacovert::oracle {

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t samples = 0;
    std::uint64_t seed = 0;
};

/// Samples are split into fixed chunks; chunk i always draws from stream
/// derive(seed, i) and chunks are merged in index order, so the estimate does
/// not depend on `workers`.
struct McOptions {
    std::int64_t samples = 1'000'000;
    std::uint64_t seed = 1;
    int workers = 1;

    void validate() const;
};

inline constexpr std::int64_t kMinSamples = 10'000;
inline constexpr std::int64_t kChunkSamples = 65'536;

/// FA + MD by direct simulation of the warden's received power; FA and MD use
/// independent draws so the per-sample sum carries the combined variance.
McEstimate mc_dep(const downlink::CovertLinkParams& p, double epsilon, const McOptions& options);

/// Mean of B log2(1 + p_a Z / (B σ² + p_j Υ)) in bit/s.
McEstimate mc_rate(const downlink::CovertLinkParams& p, double bandwidth_hz, const McOptions& options);

/// Channel-conditional average of Γ(τ2, τ1 γ) / (2 Γ(τ2)).
McEstimate mc_ber(const uplink::UplinkParams& p, const uplink::Modulation& mod, const McOptions& options);

struct StateIntegration {
    advertising::Trajectory trajectory;
    double max_local_error = 0.0;  // step-doubling estimate
    bool step_warning = false;
    std::string warning;
};

inline constexpr double kLocalErrorWarning = 1e-8;

/// Fixed-step RK4 of dx/dt = η1 a*(x) √(1 - x) - η2 x from x0 under feedback control.
StateIntegration integrate_state(const advertising::AdvertParams& p, const advertising::Equilibrium& eq,
                                 double horizon, int steps);

/// Residuals of the stationary conditions at (x̄, λ̄1, a*(x̄)).
struct FixedPointResiduals {
    double state = 0.0;    // η1 a √(1-x̄) - η2 x̄
    double adjoint = 0.0;  // -∂H/∂x with λ1 = λ̄1
    double control = 0.0;  // ∂H/∂a
};

FixedPointResiduals fixed_point_residuals(const advertising::AdvertParams& p, const advertising::Equilibrium& eq);

}  // namespace metacovert::oracle

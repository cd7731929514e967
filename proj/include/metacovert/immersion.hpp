#pragma once

#include <span>

#include "metacovert/covert_downlink.hpp"
#include "metacovert/numerics.hpp"
#include "metacovert/uplink.hpp"

namespace metacovert::immersion {

struct ImmersionInputs {
    double rate_bps = 0.0;            // downlink covert rate R^d_k
    double ber = 0.0;                 // uplink BER E^u_k
    double virtual_experience = 0.0;  // S_k

    void validate() const;
};

/// MI_k = R^d_k (1 - E^u_k) S_k.
double meta_immersion(const ImmersionInputs& in);

struct UserRequirement {
    double mi_min = 1.0;
    uplink::UplinkParams uplink{};
    uplink::Modulation modulation = uplink::modulation_params(uplink::ModulationKind::DPSK);
    downlink::CovertLinkParams downlink{};
    double s_k = 1.0;
};

struct BandwidthOptions {
    /// Re-solve the jammer power before the bandwidth search instead of using downlink.p_j.
    bool readapt_jammer = false;
    numerics::Bracket jamming_bracket{1e-6, 1e6};
};

inline constexpr numerics::Bracket kDefaultBandwidthBracketHz{1.0, 1e10};

/// Smallest B_k in `bracket` with rate(B_k) (1 - E) S_k >= mi_min.
double basic_bandwidth(const UserRequirement& req, numerics::Bracket bracket = kDefaultBandwidthBracketHz,
                       const BandwidthOptions& options = {});

double total_basic_bandwidth(std::span<const UserRequirement> reqs,
                             numerics::Bracket bracket = kDefaultBandwidthBracketHz,
                             const BandwidthOptions& options = {});

}  // namespace metacovert::immersion

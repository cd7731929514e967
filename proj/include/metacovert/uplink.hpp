#pragma once

#include <string>
#include <string_view>

#include "metacovert/fading.hpp"
#include "metacovert/numerics.hpp"

namespace metacovert::uplink {

enum class ModulationKind { CBFSK, CBPSK, NCBFSK, DPSK };

/// Conditional bit-error probability Γ(τ2, τ1 γ) / (2 Γ(τ2)).
struct Modulation {
    ModulationKind kind = ModulationKind::DPSK;
    double tau1 = 1.0;
    double tau2 = 1.0;
};

Modulation modulation_params(ModulationKind kind);
/// Case-insensitive; throws DomainError for names outside the table.
Modulation parse_modulation(std::string_view name);
std::string modulation_name(ModulationKind kind);

struct UplinkParams {
    double p_k = 1.0;        // HMD transmit power, W
    double sigma2_ka = 1.0;  // uplink noise power, W
    fading::FisherFParams h_ka{};

    void validate() const;
};

/// CDF of γ_ka = p_k |h_ka|^2 / σ²_ka.
double snr_cdf(const UplinkParams& p, double gamma);

double conditional_bep(const Modulation& mod, double snr);

/// Average BER through the CDF form
/// τ1^τ2 / (2 Γ(τ2)) ∫_0^∞ x^(τ2-1) e^(-τ1 x) F_γ(x) dx. Exactly 0.5 at p_k = 0.
double avg_ber(const UplinkParams& p, const Modulation& mod);

/// Same quantity as the channel average ∫ Γ(τ2, τ1 γ)/(2Γ(τ2)) f_γ(γ) dγ.
double avg_ber_by_density(const UplinkParams& p, const Modulation& mod);

/// Default power search range in dBW.
inline constexpr numerics::Bracket kDefaultPowerBracketDbw{-20.0, 40.0};

/// Transmit power (W) at which avg_ber equals target_ber; the search runs in dBW.
double required_power(const UplinkParams& p, const Modulation& mod, double target_ber,
                      numerics::Bracket bracket_dbw = kDefaultPowerBracketDbw);

}  // namespace metacovert::uplink

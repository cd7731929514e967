#include "metacovert/uplink.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "metacovert/errors.hpp"

namespace metacovert::uplink {
namespace {

numerics::QuadratureSpec ber_spec() {
    numerics::QuadratureSpec spec;
    spec.abs_tol = 1e-300;  // BER goes far below any fixed absolute floor
    spec.rel_tol = 1e-10;
    return spec;
}

double to_watts(double dbw) { return std::pow(10.0, dbw / 10.0); }

}  // namespace

Modulation modulation_params(ModulationKind kind) {
    switch (kind) {
        case ModulationKind::CBFSK: return {kind, 0.5, 0.5};
        case ModulationKind::CBPSK: return {kind, 1.0, 0.5};
        case ModulationKind::NCBFSK: return {kind, 0.5, 1.0};
        case ModulationKind::DPSK: return {kind, 1.0, 1.0};
    }
    throw DomainError("modulation_params: unknown modulation");
}

Modulation parse_modulation(std::string_view name) {
    std::string upper(name);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (upper == "CBFSK") return modulation_params(ModulationKind::CBFSK);
    if (upper == "CBPSK") return modulation_params(ModulationKind::CBPSK);
    if (upper == "NCBFSK") return modulation_params(ModulationKind::NCBFSK);
    if (upper == "DPSK") return modulation_params(ModulationKind::DPSK);
    throw DomainError("unknown modulation '" + std::string(name) + "' (expected CBFSK, CBPSK, NCBFSK or DPSK)");
}

std::string modulation_name(ModulationKind kind) {
    switch (kind) {
        case ModulationKind::CBFSK: return "CBFSK";
        case ModulationKind::CBPSK: return "CBPSK";
        case ModulationKind::NCBFSK: return "NCBFSK";
        case ModulationKind::DPSK: return "DPSK";
    }
    return "?";
}

void UplinkParams::validate() const {
    if (!(p_k >= 0.0) || !std::isfinite(p_k)) throw DomainError("UplinkParams: p_k must be >= 0");
    if (!(sigma2_ka > 0.0) || !std::isfinite(sigma2_ka)) throw DomainError("UplinkParams: sigma2_ka must be > 0");
    h_ka.validate();
}

double snr_cdf(const UplinkParams& p, double gamma) {
    if (!(p.p_k > 0.0)) throw DomainError("snr_cdf: p_k must be > 0");
    if (!(gamma >= 0.0)) throw DomainError("snr_cdf: gamma must be >= 0");
    return fading::fisher_f_cdf(p.h_ka, gamma * p.sigma2_ka / p.p_k);
}

double conditional_bep(const Modulation& mod, double snr) {
    return 0.5 * numerics::reg_upper_gamma(mod.tau2, mod.tau1 * snr);
}

double avg_ber(const UplinkParams& p, const Modulation& mod) {
    if (!(p.p_k >= 0.0)) throw DomainError("avg_ber: p_k must be >= 0");
    if (p.p_k == 0.0) return 0.5;
    const double log_coeff = mod.tau2 * std::log(mod.tau1) - std::log(2.0) - std::lgamma(mod.tau2);
    const numerics::ScalarFunction integrand = [&p, &mod, log_coeff](double x) {
        const double cdf = snr_cdf(p, x);
        if (cdf == 0.0) return 0.0;
        return std::exp(log_coeff + (mod.tau2 - 1.0) * std::log(x) - mod.tau1 * x) * cdf;
    };
    const double value = numerics::integrate_semi_infinite(integrand, ber_spec(), 1.0 / mod.tau1).value;
    return std::clamp(value, 0.0, 0.5);
}

double avg_ber_by_density(const UplinkParams& p, const Modulation& mod) {
    if (p.p_k == 0.0) return 0.5;
    const double mean_snr = p.p_k * p.h_ka.mean / p.sigma2_ka;
    const numerics::ScalarFunction integrand = [&p, &mod](double gamma) {
        const double z = gamma * p.sigma2_ka / p.p_k;
        const double density = fading::fisher_f_pdf(p.h_ka, z) * p.sigma2_ka / p.p_k;
        if (density == 0.0) return 0.0;
        return conditional_bep(mod, gamma) * density;
    };
    return numerics::integrate_semi_infinite(integrand, ber_spec(), std::min(mean_snr, 1.0 / mod.tau1)).value;
}

double required_power(const UplinkParams& p, const Modulation& mod, double target_ber,
                      numerics::Bracket bracket_dbw) {
    if (!(target_ber > 0.0 && target_ber < 0.5)) throw DomainError("required_power: target must lie in (0, 0.5)");
    bracket_dbw.validate();
    const double log_target = std::log(target_ber);
    const auto gap = [&p, &mod, log_target](double dbw) {
        UplinkParams trial = p;
        trial.p_k = to_watts(dbw);
        return std::log(avg_ber(trial, mod)) - log_target;
    };
    try {
        return to_watts(numerics::find_root_bracketed(gap, bracket_dbw, 1e-9));
    } catch (const NoSignChangeError&) {
        std::ostringstream msg;
        msg << "required_power: BER " << target_ber << " not reachable for p_k in [" << bracket_dbw.lo << ", "
            << bracket_dbw.hi << "] dBW";
        throw NoSignChangeError(msg.str());
    }
}

}  // namespace metacovert::uplink

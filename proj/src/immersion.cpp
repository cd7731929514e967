#include "metacovert/immersion.hpp"

#include <cmath>
#include <sstream>

#include "metacovert/errors.hpp"

namespace metacovert::immersion {
namespace {

constexpr double kLogBandwidthTol = 1e-11;

}  // namespace

void ImmersionInputs::validate() const {
    if (!(rate_bps >= 0.0)) throw DomainError("ImmersionInputs: rate must be >= 0");
    if (!(ber >= 0.0 && ber <= 1.0)) throw DomainError("ImmersionInputs: ber must lie in [0, 1]");
    if (!(virtual_experience >= 0.0)) throw DomainError("ImmersionInputs: virtual experience must be >= 0");
}

double meta_immersion(const ImmersionInputs& in) {
    in.validate();
    return in.rate_bps * (1.0 - in.ber) * in.virtual_experience;
}

double basic_bandwidth(const UserRequirement& req, numerics::Bracket bracket, const BandwidthOptions& options) {
    bracket.validate();
    if (bracket.lo < 0.0) throw DomainError("basic_bandwidth: bracket.lo must be >= 0");
    if (!(req.mi_min > 0.0)) throw DomainError("basic_bandwidth: mi_min must be > 0");

    const double ber = uplink::avg_ber(req.uplink, req.modulation);
    const double factor = (1.0 - ber) * req.s_k;
    if (!(factor > 0.0)) throw InfeasibleError("basic_bandwidth: (1 - BER) * S_k is zero, no bandwidth suffices");

    downlink::CovertLinkParams link = req.downlink;
    // The warden's statistics do not involve B_k, so one jammer solve covers every candidate bandwidth.
    if (options.readapt_jammer) link.p_j = downlink::min_jamming_power(link, options.jamming_bracket);

    const auto shortfall = [&link, factor, &req](double bandwidth) {
        return downlink::ergodic_covert_rate(link, bandwidth) * factor - req.mi_min;
    };
    if (shortfall(bracket.lo) >= 0.0) return bracket.lo;
    if (shortfall(bracket.hi) < 0.0) {
        std::ostringstream msg;
        msg << "basic_bandwidth: Meta-Immersion " << req.mi_min << " not reachable below " << bracket.hi << " Hz";
        throw InfeasibleError(msg.str());
    }

    numerics::RootResult root;
    if (bracket.lo > 0.0) {
        const auto in_log = [&shortfall](double log_b) { return shortfall(std::exp(log_b)); };
        root = numerics::solve_bracketed(in_log, {std::log(bracket.lo), std::log(bracket.hi)}, kLogBandwidthTol);
        root = {std::exp(root.x), std::exp(root.x_lo), std::exp(root.x_hi), root.iterations};
    } else {
        root = numerics::solve_bracketed(shortfall, bracket, kLogBandwidthTol * bracket.hi);
    }
    if (shortfall(root.x) >= 0.0) return root.x;
    return root.x_hi;
}

double total_basic_bandwidth(std::span<const UserRequirement> reqs, numerics::Bracket bracket,
                             const BandwidthOptions& options) {
    double total = 0.0;
    for (std::size_t k = 0; k < reqs.size(); ++k) {
        try {
            total += basic_bandwidth(reqs[k], bracket, options);
        } catch (const InfeasibleError& e) {
            std::ostringstream msg;
            msg << "user " << k << ": " << e.what();
            throw InfeasibleError(msg.str());
        } catch (const NoSignChangeError& e) {
            std::ostringstream msg;
            msg << "user " << k << ": " << e.what();
            throw InfeasibleError(msg.str());
        }
    }
    return total;
}

}  // namespace metacovert::immersion

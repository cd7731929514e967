#pragma once

#include <variant>

#include "metacovert/rng.hpp"

namespace metacovert::fading {

/// Squared α-μ envelope Υ ~ αμ(α, μ, γ̄). `mean` is γ̄ = E[Υ] in linear units.
struct AlphaMuParams {
    double alpha = 2.0;
    double mu = 1.0;
    double mean = 1.0;

    /// β = γ̄ Γ(μ) / Γ(μ + 2/α).
    double scale() const;
    void validate() const;
};

/// Squared Fisher-Snedecor F envelope Z ~ F(m, m_s, κ̄). m_s > 1 so that κ̄ is the mean.
struct FisherFParams {
    double m = 1.0;
    double m_s = 2.0;
    double mean = 1.0;

    void validate() const;
};

using FadingModel = std::variant<AlphaMuParams, FisherFParams>;

double alpha_mu_pdf(const AlphaMuParams& p, double gamma);
double alpha_mu_cdf(const AlphaMuParams& p, double gamma);
/// 1 - CDF, evaluated through the upper incomplete gamma.
double alpha_mu_ccdf(const AlphaMuParams& p, double gamma);
/// β G^(2/α) with G ~ Gamma(μ, 1).
double alpha_mu_sample(const AlphaMuParams& p, RandomStream& rng);

/// Returns +inf at z = 0 when m < 1 (integrable singularity).
double fisher_f_pdf(const FisherFParams& p, double z);
double fisher_f_cdf(const FisherFParams& p, double z);
double fisher_f_ccdf(const FisherFParams& p, double z);
/// (m_s - 1) κ̄ G1 / (m G2) with G1 ~ Gamma(m, 1), G2 ~ Gamma(m_s, 1).
double fisher_f_sample(const FisherFParams& p, RandomStream& rng);

double pdf(const FadingModel& model, double x);
double cdf(const FadingModel& model, double x);
double mean(const FadingModel& model);
double sample(const FadingModel& model, RandomStream& rng);

}  // namespace metacovert::fading

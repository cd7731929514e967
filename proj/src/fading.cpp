#include "metacovert/fading.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "metacovert/errors.hpp"
#include "metacovert/numerics.hpp"

namespace metacovert::fading {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool positive_finite(double v) { return v > 0.0 && std::isfinite(v); }

void check_argument(double x, const char* name) {
    if (!(x >= 0.0)) {
        std::ostringstream msg;
        msg << name << ": argument must be >= 0 (got " << x << ")";
        throw DomainError(msg.str());
    }
}

double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

// Regularized incomplete beta I_x(p, q) through x^p 2F1(p, 1-q; p+1; x) / (p B(p, q)), x <= 1/2.
double incomplete_beta_small(double p, double q, double x) {
    if (x == 0.0) return 0.0;
    return std::exp(p * std::log(x) - std::log(p) - log_beta(p, q)) *
           numerics::gauss_2f1(p, 1.0 - q, p + 1.0, x);
}

}  // namespace

double AlphaMuParams::scale() const { return mean * std::exp(std::lgamma(mu) - std::lgamma(mu + 2.0 / alpha)); }

void AlphaMuParams::validate() const {
    if (!positive_finite(alpha) || !positive_finite(mu) || !positive_finite(mean)) {
        throw DomainError("AlphaMuParams: alpha, mu and mean must be positive and finite");
    }
}

void FisherFParams::validate() const {
    if (!positive_finite(m) || !positive_finite(mean) || !(m_s > 1.0) || !std::isfinite(m_s)) {
        throw DomainError("FisherFParams: requires m > 0, m_s > 1, mean > 0");
    }
}

double alpha_mu_pdf(const AlphaMuParams& p, double gamma) {
    check_argument(gamma, "alpha_mu_pdf");
    const double beta = p.scale();
    const double exponent = 0.5 * p.alpha * p.mu - 1.0;
    const double log_norm = std::log(0.5 * p.alpha) - 0.5 * p.alpha * p.mu * std::log(beta) - std::lgamma(p.mu);
    if (gamma == 0.0) {
        if (exponent < 0.0) return kInf;
        if (exponent > 0.0) return 0.0;
        return std::exp(log_norm);
    }
    if (std::isinf(gamma)) return 0.0;
    return std::exp(log_norm + exponent * std::log(gamma) - std::pow(gamma / beta, 0.5 * p.alpha));
}

double alpha_mu_cdf(const AlphaMuParams& p, double gamma) {
    check_argument(gamma, "alpha_mu_cdf");
    return numerics::reg_lower_gamma(p.mu, std::pow(gamma / p.scale(), 0.5 * p.alpha));
}

double alpha_mu_ccdf(const AlphaMuParams& p, double gamma) {
    check_argument(gamma, "alpha_mu_ccdf");
    return numerics::reg_upper_gamma(p.mu, std::pow(gamma / p.scale(), 0.5 * p.alpha));
}

double alpha_mu_sample(const AlphaMuParams& p, RandomStream& rng) {
    return p.scale() * std::pow(rng.gamma(p.mu), 2.0 / p.alpha);
}

double fisher_f_pdf(const FisherFParams& p, double z) {
    check_argument(z, "fisher_f_pdf");
    const double k = (p.m_s - 1.0) * p.mean;
    const double lb = log_beta(p.m, p.m_s);
    if (z == 0.0) {
        if (p.m < 1.0) return kInf;
        if (p.m > 1.0) return 0.0;
        return std::exp(-std::log(k) - lb);
    }
    if (std::isinf(z)) return 0.0;
    return std::exp(p.m * std::log(p.m) + p.m_s * std::log(k) + (p.m - 1.0) * std::log(z) - lb -
                    (p.m + p.m_s) * std::log(p.m * z + k));
}

// F(z) = z^m 2F1(m, m+m_s; m+1; -U) / (m^(1-m) B(m, m_s) ((m_s-1) κ̄)^m), U = m z / ((m_s-1) κ̄).
// Past U = 1 the complementary form I_{1/(1+U)}(m_s, m) keeps the series argument below 1/2.
double fisher_f_cdf(const FisherFParams& p, double z) {
    check_argument(z, "fisher_f_cdf");
    if (z == 0.0) return 0.0;
    if (std::isinf(z)) return 1.0;
    const double u = p.m * z / ((p.m_s - 1.0) * p.mean);
    if (u > 1.0) return 1.0 - fisher_f_ccdf(p, z);
    const double value = std::exp(p.m * std::log(u) - std::log(p.m) - log_beta(p.m, p.m_s)) *
                         numerics::gauss_2f1(p.m, p.m + p.m_s, p.m + 1.0, -u);
    return std::min(1.0, std::max(0.0, value));
}

double fisher_f_ccdf(const FisherFParams& p, double z) {
    check_argument(z, "fisher_f_ccdf");
    if (z == 0.0) return 1.0;
    if (std::isinf(z)) return 0.0;
    const double u = p.m * z / ((p.m_s - 1.0) * p.mean);
    if (u <= 1.0) return 1.0 - fisher_f_cdf(p, z);
    const double value = incomplete_beta_small(p.m_s, p.m, 1.0 / (1.0 + u));
    return std::min(1.0, std::max(0.0, value));
}

double fisher_f_sample(const FisherFParams& p, RandomStream& rng) {
    const double g1 = rng.gamma(p.m);
    const double g2 = rng.gamma(p.m_s);
    return (p.m_s - 1.0) * p.mean * g1 / (p.m * g2);
}

namespace {
template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;
}  // namespace

double pdf(const FadingModel& model, double x) {
    return std::visit(Overloaded{[x](const AlphaMuParams& p) { return alpha_mu_pdf(p, x); },
                                 [x](const FisherFParams& p) { return fisher_f_pdf(p, x); }},
                      model);
}

double cdf(const FadingModel& model, double x) {
    return std::visit(Overloaded{[x](const AlphaMuParams& p) { return alpha_mu_cdf(p, x); },
                                 [x](const FisherFParams& p) { return fisher_f_cdf(p, x); }},
                      model);
}

double mean(const FadingModel& model) {
    return std::visit([](const auto& p) { return p.mean; }, model);
}

double sample(const FadingModel& model, RandomStream& rng) {
    return std::visit(Overloaded{[&rng](const AlphaMuParams& p) { return alpha_mu_sample(p, rng); },
                                 [&rng](const FisherFParams& p) { return fisher_f_sample(p, rng); }},
                      model);
}

}  // namespace metacovert::fading

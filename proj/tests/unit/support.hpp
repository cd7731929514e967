#pragma once

#include <cmath>
#include <cstdint>

#include "metacovert/fading.hpp"
#include "metacovert/rng.hpp"

namespace testsupport {

/// Uniform draw in [lo, hi) from a test-local stream.
inline double between(metacovert::RandomStream& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

inline metacovert::fading::AlphaMuParams random_alpha_mu(metacovert::RandomStream& rng) {
    return {between(rng, 0.8, 4.0), between(rng, 0.6, 5.0), std::exp(between(rng, -1.5, 1.5))};
}

inline metacovert::fading::FisherFParams random_fisher(metacovert::RandomStream& rng) {
    return {between(rng, 0.7, 6.0), between(rng, 1.6, 8.0), std::exp(between(rng, -1.5, 1.5))};
}

inline bool close_rel(double a, double b, double rel) { return std::abs(a - b) <= rel * std::abs(b); }

}  // namespace testsupport

#pragma once

#include <cstdint>
#include <random>

namespace metacovert {

/// Reproducible random stream. The engine is std::mt19937_64 (its output
/// sequence is fixed by the standard); every transformation on top of it is
/// implemented here, so draws are identical across platforms and libraries:
///  - uniform: top 53 bits, shifted by half an ulp into the open interval (0, 1)
///  - normal: Marsaglia polar method
///  - gamma: Marsaglia-Tsang squeeze for shape >= 1, boosted by U^(1/shape) below 1
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed);

    /// Independent stream `index` of a master seed (splitmix64 mixing).
    static RandomStream derive(std::uint64_t master_seed, std::uint64_t index);

    double uniform();
    double normal();
    /// Gamma(shape, scale = 1).
    double gamma(double shape);

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace metacovert

#ifndef FASTICA_RNG_HPP
#define FASTICA_RNG_HPP

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace fastica {

// Deterministic draws built directly on mt19937_64. The engine streams are
// pinned by the C++ standard; the transforms below are pinned here, so a
// given seed produces the same samples on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // Strictly inside (0, 1), 53-bit resolution.
    double uniform01() {
        return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
    }

    // +1.0 or -1.0, one engine call.
    double sign() { return (eng_() & 1u) ? 1.0 : -1.0; }

    // Standard normal, Marsaglia polar method.
    double normal();

    // Gamma(shape, 1), Marsaglia-Tsang; shape < 1 handled by the boost trick
    // Gamma(shape) = Gamma(shape+1) * U^{1/shape}.
    double gamma(double shape);

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// splitmix64-style combiner used to derive replicate/source seeds from a
// master seed. Distinct (master, index) pairs give decorrelated streams.
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index);

// Haar-distributed orthogonal p x p matrix (QR of a Gaussian matrix with the
// R-diagonal sign fix).
Eigen::MatrixXd random_orthogonal(int p, Rng& rng);

} // namespace fastica

#endif

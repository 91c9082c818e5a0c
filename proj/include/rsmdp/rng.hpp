#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace rsmdp {

/// Derives an independent stream seed from a master seed and a named purpose
/// plus up to three integer coordinates (e.g. stage, state, action).
/// The mapping is a fixed splitmix64/FNV-1a chain, identical on every platform.
std::uint64_t split_seed(std::uint64_t master, std::string_view purpose, std::uint64_t i = 0,
                         std::uint64_t j = 0, std::uint64_t k = 0);

/**
 * Seedable generator with platform-independent variates.
 *
 * The engine is std::mt19937_64, whose output sequence is fixed by the
 * standard. The distributions are implemented here rather than taken from
 * <random>, whose distribution algorithms are implementation-defined.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0,1) with 53 random bits.
    double uniform();
    /// Uniform on (0,1).
    double uniform_open();
    /// Uniform integer in [0, n).
    std::size_t below(std::size_t n);
    /// Standard normal (Marsaglia polar method).
    double normal();
    /// Gamma(shape, rate 1). Marsaglia–Tsang for shape >= 1; boosted for shape < 1.
    double gamma(double shape);
    /// log of a Gamma(shape, 1) variate; stays finite for very small shapes.
    double log_gamma_variate(double shape);
    /// Index drawn from a probability vector by inverse CDF.
    std::size_t categorical(std::span<const double> probs);

private:
    double marsaglia_tsang(double shape);

    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace rsmdp

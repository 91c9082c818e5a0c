#include "rsmdp/rng.hpp"

#include <cmath>

#include "rsmdp/errors.hpp"

namespace rsmdp {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace

std::uint64_t split_seed(std::uint64_t master, std::string_view purpose, std::uint64_t i, std::uint64_t j,
                         std::uint64_t k) {
    std::uint64_t h = splitmix64(master ^ fnv1a(purpose));
    h = splitmix64(h ^ i);
    h = splitmix64(h ^ (j + 0x632be59bd9b4e019ULL));
    h = splitmix64(h ^ (k + 0x8cb92ba72f3d8dd7ULL));
    return h;
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::uniform_open() {
    // (k + 0.5) / 2^53 for k in [0, 2^53) never hits 0 or 1
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

std::size_t Rng::below(std::size_t n) {
    if (n == 0) throw InvalidArgument("Rng::below requires n > 0");
    // rejection keeps the result exactly uniform
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return static_cast<std::size_t>(x % bound);
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
}

double Rng::marsaglia_tsang(double shape) {
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform_open();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double Rng::gamma(double shape) {
    if (!(shape > 0.0)) throw InvalidArgument("gamma shape must be positive");
    if (shape >= 1.0) return marsaglia_tsang(shape);
    return std::exp(log_gamma_variate(shape));
}

double Rng::log_gamma_variate(double shape) {
    if (!(shape > 0.0)) throw InvalidArgument("gamma shape must be positive");
    if (shape >= 1.0) return std::log(marsaglia_tsang(shape));
    // G(a) = G(a+1) * U^(1/a), evaluated in log space
    const double g = marsaglia_tsang(shape + 1.0);
    return std::log(g) + std::log(uniform_open()) / shape;
}

std::size_t Rng::categorical(std::span<const double> probs) {
    if (probs.empty()) throw InvalidArgument("categorical over an empty vector");
    const double u = uniform();
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        if (u < acc) return i;
    }
    // rounding left u above the accumulated mass: return the last atom with mass
    for (std::size_t i = probs.size(); i-- > 0;)
        if (probs[i] > 0.0) return i;
    return probs.size() - 1;
}

} // namespace rsmdp

#pragma once

/**
 * @file random.hpp
 * @brief Seeded, platform-reproducible randomness with exact sampling from
 *        rational weight vectors.
 *
 * The engine is mt19937_64, whose output sequence is pinned by the standard,
 * so a seed determines the same draws on every platform. Discrete sampling
 * clears denominators and draws a uniform big integer, so a categorical draw
 * from exact rational weights follows the exact law.
 */

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "regen/rational.hpp"

namespace regen {

class RandomGenerator {
public:
    explicit RandomGenerator(std::uint64_t seed) : engine_(seed), seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next() { return engine_(); }

    /// Uniform on {0, ..., bound-1} by rejection.
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) throw std::domain_error("below: zero bound");
        const std::uint64_t threshold = (0 - bound) % bound; // 2^64 mod bound
        for (;;) {
            const std::uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

    /// Uniform on {0, ..., bound-1} for arbitrary-precision bounds.
    Int below_big(const Int& bound) {
        if (bound <= 0) throw std::domain_error("below_big: non-positive bound");
        if (bound == 1) return 0;
        const unsigned bits = static_cast<unsigned>(msb(bound)) + 1;
        const unsigned words = (bits + 63) / 64;
        for (;;) {
            Int r = 0;
            for (unsigned w = 0; w < words; ++w) {
                r <<= 64;
                r |= Int(next());
            }
            r >>= words * 64 - bits;
            if (r < bound) return r;
        }
    }

    /// Index i with probability weights[i] / sum(weights), exactly.
    std::size_t categorical(std::span<const Rational> weights) {
        Int common = 1;
        for (const Rational& w : weights) {
            if (w < 0) throw validation_error("categorical: negative weight");
            common = lcm(common, denominator(w));
        }
        std::vector<Int> scaled(weights.size());
        Int total = 0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            scaled[i] = numerator(weights[i]) * (common / denominator(weights[i]));
            total += scaled[i];
        }
        if (total <= 0) throw validation_error("categorical: weights sum to zero");
        Int u = below_big(total);
        for (std::size_t i = 0; i < scaled.size(); ++i) {
            if (u < scaled[i]) return i;
            u -= scaled[i];
        }
        return scaled.size() - 1; // unreachable
    }

    std::size_t categorical(const std::vector<Rational>& weights) {
        return categorical(std::span<const Rational>(weights));
    }

    /// Uniform dyadic rational in [0, 1) with the given resolution.
    Rational unit_rational(unsigned bits = 128) {
        const unsigned words = (bits + 63) / 64;
        Int r = 0;
        for (unsigned w = 0; w < words; ++w) {
            r <<= 64;
            r |= Int(next());
        }
        r >>= words * 64 - bits;
        return Rational(r, Int(1) << bits);
    }

    /// Uniform double in [0, 1) with 53 random mantissa bits.
    double unit_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
};

/// Exact check that an observed count sits within three binomial standard
/// deviations of its expectation: (count - N p)^2 <= 9 N p (1-p).
inline bool within_three_sigma(std::uint64_t count, std::uint64_t total, const Rational& p) {
    if (p < 0 || p > 1) throw std::domain_error("within_three_sigma: p outside [0,1]");
    const Rational n(total);
    const Rational diff = Rational(count) - n * p;
    return diff * diff <= 9 * n * p * (1 - p);
}

} // namespace regen

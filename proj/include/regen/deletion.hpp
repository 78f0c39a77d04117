#pragma once

/**
 * @file deletion.hpp
 * @brief Operations tying deletion kernels to partition structures: the
 *        unconditional deleted-size law, the regeneration residual, kernel
 *        recovery, and the positivity trichotomy.
 */

#include <string>
#include <vector>

#include "regen/decrement.hpp"
#include "regen/eppf.hpp"
#include "regen/kernel.hpp"
#include "regen/partition.hpp"
#include "regen/rational.hpp"

namespace regen {

/// Unconditional law of the deleted part size:
/// q(n, x) = sum over lambda containing x of d(lambda, x) p(lambda).
inline DecrementRow deleted_part_distribution(const PartitionDistribution& p,
                                              const DeletionKernel& kernel) {
    DecrementRow row;
    row.n = p.n;
    row.q.assign(static_cast<std::size_t>(p.n), Rational(0));
    for (const auto& [lambda, mass] : p.probs) {
        if (mass == 0) continue;
        for (const auto& [x, a] : lambda.multiplicities())
            row.q[static_cast<std::size_t>(x) - 1] += kernel.value(lambda, x) * mass;
    }
    return row;
}

/// Largest deviation from the regeneration identity, with the argument
/// attaining it.
struct RegenResidual {
    Rational value;
    int level = 0;
    Partition lambda;
    int part = 0;
};

/**
 * Maximum over all levels m <= n, all partitions lambda of m and all parts
 * x of |p(lambda) d(lambda, x) - q(m, x) p(lambda - {x})|, with q(m, .) the
 * deleted-size law computed from the level-m distribution and the kernel.
 * Exactly zero iff the structure is regenerative under the kernel up to
 * level n. For table kernels, partitions outside both the table and the
 * support contribute through the right side only.
 */
inline RegenResidual regen_residual(const PartitionLevels& levels, const DeletionKernel& kernel) {
    require_sampling_consistent(levels, "regen_residual");
    RegenResidual worst{Rational(0), 0, Partition(), 0};
    for (int m = 1; m <= levels.max_weight(); ++m) {
        const PartitionDistribution& dist = levels.at(m);
        const DecrementRow q = deleted_part_distribution(dist, kernel);
        for (const Partition& lambda : enumerate_partitions(m)) {
            const Rational mass = dist.at(lambda);
            for (const auto& [x, a] : lambda.multiplicities()) {
                const Rational left = mass == 0 ? Rational(0) : mass * kernel.value(lambda, x);
                Rational diff = left - q.at(x) * levels.prob(lambda.without_part(x));
                if (diff < 0) diff = -diff;
                if (diff > worst.value) worst = RegenResidual{diff, m, lambda, x};
            }
        }
    }
    return worst;
}

/// Kernel value implied by the structure and a deleted-size law:
/// d(lambda, x) = q(n, x) p(lambda - {x}) / p(lambda). Undefined where
/// p(lambda) = 0; in the hook case several kernels generate the same
/// structure, so that situation is reported as ambiguous rather than
/// resolved by a convention.
inline Rational kernel_from_structure(const PartitionLevels& levels, const DecrementRow& q,
                                      const Partition& lambda, int x) {
    if (!lambda.has_part(x))
        throw std::domain_error("kernel_from_structure: " + std::to_string(x) +
                                " is not a part of " + lambda.to_string());
    if (lambda.weight() != q.n)
        throw validation_error("kernel_from_structure: row level does not match partition weight");
    const Rational mass = levels.prob(lambda);
    if (mass == 0)
        throw ambiguity_error("kernel_from_structure: p" + lambda.to_string() +
                              " = 0, kernel not determined (hook-type ambiguity)");
    return q.at(x) * levels.prob(lambda.without_part(x)) / mass;
}

/**
 * Residual of the reduction identity between two structures:
 *   p0(lambda) d(lambda, x) = q(n, x) p1(lambda - {x}),
 * with q the deleted-size law of p0 under the kernel. Zero iff deleting one
 * part from p0 according to d leaves a sample of p1.
 */
inline RegenResidual reduces_residual(const PartitionDistribution& p0, const PartitionLevels& p1,
                                      const DeletionKernel& kernel) {
    if (p1.max_weight() < p0.n - 1)
        throw validation_error("reduces_residual: reduced structure must cover levels below n");
    const DecrementRow q = deleted_part_distribution(p0, kernel);
    RegenResidual worst{Rational(0), p0.n, Partition(), 0};
    for (const Partition& lambda : enumerate_partitions(p0.n)) {
        const Rational mass = p0.at(lambda);
        for (const auto& [x, a] : lambda.multiplicities()) {
            const Rational left = mass == 0 ? Rational(0) : mass * kernel.value(lambda, x);
            Rational diff = left - q.at(x) * p1.prob(lambda.without_part(x));
            if (diff < 0) diff = -diff;
            if (diff > worst.value) worst = RegenResidual{diff, p0.n, lambda, x};
        }
    }
    return worst;
}

enum class PositivityClass { Hook, StrictlyPositive, NotRegenerative };

inline std::string to_string(PositivityClass c) {
    switch (c) {
        case PositivityClass::Hook: return "hook";
        case PositivityClass::StrictlyPositive: return "strictly-positive";
        case PositivityClass::NotRegenerative: return "not-regenerative";
    }
    return "?";
}

/**
 * Trichotomy of a sampling-consistent structure by the mass of (2,2):
 * a regenerative structure either never leaves hook partitions (p(2,2) = 0)
 * or has strictly positive probabilities everywhere (p(2,2) > 0). Inputs
 * contradicting whichever branch p(2,2) selects cannot be regenerative.
 */
inline PositivityClass positivity_dichotomy(const PartitionLevels& levels) {
    if (levels.max_weight() < 4)
        throw validation_error("positivity_dichotomy: needs levels up to weight 4");
    require_sampling_consistent(levels, "positivity_dichotomy");
    const Rational p22 = levels.at(4).at(Partition{2, 2});
    if (p22 > 0) {
        for (int m = 1; m <= levels.max_weight(); ++m)
            for (const Partition& lambda : enumerate_partitions(m))
                if (levels.at(m).at(lambda) == 0) return PositivityClass::NotRegenerative;
        return PositivityClass::StrictlyPositive;
    }
    for (int m = 1; m <= levels.max_weight(); ++m)
        for (const auto& [lambda, mass] : levels.at(m).probs)
            if (mass > 0 && !lambda.is_hook()) return PositivityClass::NotRegenerative;
    return PositivityClass::Hook;
}

} // namespace regen

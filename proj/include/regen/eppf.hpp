#pragma once

/**
 * @file eppf.hpp
 * @brief Exchangeable partition probability functions: the Ewens family, its
 *        two-parameter extension, and the one-level sampling projection.
 *
 * A partition structure assigns to every n a distribution over partitions of
 * n such that removing one uniformly sampled ball maps the level-(n+1) law
 * exactly onto the level-n law. All values here are exact rationals, so the
 * consistency identity can be asserted as equality, not approximation.
 */

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "regen/partition.hpp"
#include "regen/rational.hpp"

namespace regen {

/// Generalized rising factorial: product of x, x+step, ..., x+(n-1)*step.
inline Rational rising_factorial(const Rational& x, int n, const Rational& step) {
    Rational acc = 1;
    for (int i = 0; i < n; ++i) acc *= x + i * step;
    return acc;
}

/**
 * Parameter pair (alpha, theta) of the two-parameter family.
 *
 * Default range: 0 <= alpha <= 1, theta >= 0. With extended_range the strip
 * 0 < alpha < 1, theta > -alpha is also admitted; distributions there are
 * still valid partition structures but are exactly the ones whose decrement
 * inversion can go negative, so the flag exists to express negative tests.
 */
class TwoParamModel {
public:
    TwoParamModel(Rational alpha, Rational theta, bool extended_range = false)
        : alpha_(std::move(alpha)), theta_(std::move(theta)), extended_(extended_range) {
        const bool default_ok = alpha_ >= 0 && alpha_ <= 1 && theta_ >= 0;
        const bool extended_ok = alpha_ > 0 && alpha_ < 1 && theta_ > -alpha_;
        if (!(default_ok || (extended_ && extended_ok)))
            throw std::domain_error("TwoParamModel: parameters (" + to_string(alpha_) + "," +
                                    to_string(theta_) + ") outside admitted range");
    }

    static TwoParamModel ewens(const Rational& theta) { return TwoParamModel(0, theta); }

    const Rational& alpha() const { return alpha_; }
    const Rational& theta() const { return theta_; }
    bool extended_range() const { return extended_; }

    /// tau = alpha / (alpha + theta), the mixing weight of the deletion
    /// kernel this structure regenerates under. Conventions: alpha = 0 gives
    /// 0, theta = 0 gives 1; the doubly degenerate (0,0) structure (one
    /// block) maps to 1 as well, since it regenerates under every kernel.
    Rational deletion_tau() const {
        if (theta_ == 0) return 1;
        if (alpha_ == 0) return 0;
        return alpha_ / (alpha_ + theta_);
    }

private:
    Rational alpha_;
    Rational theta_;
    bool extended_;
};

/// Probability that the random partition of n equals lambda.
/// Zero-probability partitions may be stored explicitly or omitted.
struct PartitionDistribution {
    int n = 0;
    std::map<Partition, Rational> probs;

    Rational at(const Partition& lambda) const {
        auto it = probs.find(lambda);
        return it == probs.end() ? Rational(0) : it->second;
    }

    Rational total() const {
        Rational s = 0;
        for (const auto& [lambda, p] : probs) s += p;
        return s;
    }
};

/// Exact value of the two-parameter sampling formula at lambda.
///
/// Boundary parameters use the continuity limits: alpha = 1 is the point
/// mass at the all-singleton partition; theta = 0 with alpha > 0 cancels the
/// leading theta of the rising-factorial ratio; (0,0) is the point mass at
/// the one-block partition.
inline Rational eppf(const TwoParamModel& model, const Partition& lambda) {
    const int n = lambda.weight();
    if (n < 1) throw std::domain_error("eppf: empty partition");
    const Rational& alpha = model.alpha();
    const Rational& theta = model.theta();
    const int ell = lambda.part_count();

    if (alpha == 1) return lambda == Partition(std::vector<int>(n, 1)) ? 1 : 0;
    if (theta == 0 && alpha == 0) return lambda == Partition::single(n) ? 1 : 0;

    Rational product = 1;
    for (const auto& [r, a] : lambda.multiplicities()) {
        const Rational factor = rising_factorial(1 - alpha, r - 1, 1) / Rational(factorial(r));
        product *= pow_rational(factor, a) / Rational(factorial(a));
    }

    if (theta == 0) {
        // Limit of (theta)_{ell, alpha} / (theta)_{n, 1} as theta -> 0.
        return Rational(factorial(n)) * pow_rational(alpha, ell - 1) *
               Rational(factorial(ell - 1)) / Rational(factorial(n - 1)) * product;
    }
    return Rational(factorial(n)) * rising_factorial(theta, ell, alpha) /
           rising_factorial(theta, n, 1) * product;
}

/// Ewens sampling formula, computed in its own closed form
/// n! theta^ell / (theta)_{n,1} * prod_r 1 / (r^{a_r} a_r!).
/// Agrees with eppf at alpha = 0; kept separate so the two routes check
/// each other.
inline Rational eppf_ewens(const Rational& theta, const Partition& lambda) {
    if (theta < 0) throw std::domain_error("eppf_ewens: theta must be nonnegative");
    const int n = lambda.weight();
    if (n < 1) throw std::domain_error("eppf_ewens: empty partition");
    if (theta == 0) return lambda == Partition::single(n) ? 1 : 0;
    const int ell = lambda.part_count();
    Rational product = 1;
    for (const auto& [r, a] : lambda.multiplicities())
        product /= pow_rational(Rational(r), a) * Rational(factorial(a));
    return Rational(factorial(n)) * pow_rational(theta, ell) / rising_factorial(theta, n, 1) *
           product;
}

/// Full distribution over partitions of n. Zero-probability partitions are
/// omitted from the stored map.
inline PartitionDistribution partition_distribution(const TwoParamModel& model, int n,
                                                    int limit = kDefaultPartitionLimit) {
    PartitionDistribution dist;
    dist.n = n;
    for (const Partition& lambda : enumerate_partitions(n, limit)) {
        Rational p = eppf(model, lambda);
        if (p != 0) dist.probs.emplace(lambda, std::move(p));
    }
    return dist;
}

/// One-level sampling projection: image of the level-(n+1) law under removal
/// of one uniformly chosen ball. At lambda with multiplicities (a_r) the
/// projected mass is
///   p(a_1+1, a_2, ...) (a_1+1)/(n+1)
///   + sum_{r>1, a_{r-1}>0} p(..., a_{r-1}-1, a_r+1, ...) r (a_r+1)/(n+1).
inline PartitionDistribution project_one_level(const PartitionDistribution& dist) {
    const int n = dist.n - 1;
    if (n < 1) throw std::domain_error("project_one_level: nothing below level 1");
    PartitionDistribution out;
    out.n = n;
    for (const Partition& lambda : enumerate_partitions(n)) {
        Rational p = dist.at(lambda.with_part(1)) * Rational(lambda.multiplicity(1) + 1, n + 1);
        for (const auto& [r_minus_1, a] : lambda.multiplicities()) {
            const int r = r_minus_1 + 1;
            const Partition grown = lambda.without_part(r - 1).with_part(r);
            p += dist.at(grown) * Rational(r * (lambda.multiplicity(r) + 1), n + 1);
        }
        if (p != 0) out.probs.emplace(lambda, std::move(p));
    }
    return out;
}

/// Maximum absolute difference between the projection of dist_hi and
/// dist_lo; exactly zero iff the two levels are sampling-consistent.
inline Rational consistency_residual(const PartitionDistribution& dist_hi,
                                     const PartitionDistribution& dist_lo) {
    if (dist_hi.n != dist_lo.n + 1)
        throw validation_error("consistency_residual: weights must differ by one");
    const PartitionDistribution projected = project_one_level(dist_hi);
    Rational max = 0;
    for (const Partition& lambda : enumerate_partitions(dist_lo.n)) {
        Rational d = projected.at(lambda) - dist_lo.at(lambda);
        if (d < 0) d = -d;
        if (d > max) max = d;
    }
    return max;
}

/**
 * Distributions at every level 0..n of one structure. Level 0 is the empty
 * partition with mass 1, so deletion identities can evaluate p(lambda - {x})
 * uniformly even when the whole partition is deleted.
 */
struct PartitionLevels {
    std::vector<PartitionDistribution> levels; // levels[m].n == m

    int max_weight() const { return static_cast<int>(levels.size()) - 1; }

    const PartitionDistribution& at(int m) const { return levels.at(static_cast<std::size_t>(m)); }

    Rational prob(const Partition& lambda) const { return at(lambda.weight()).at(lambda); }
};

inline PartitionDistribution trivial_level_zero() {
    PartitionDistribution l0;
    l0.n = 0;
    l0.probs.emplace(Partition(), 1);
    return l0;
}

inline PartitionLevels partition_levels(const TwoParamModel& model, int n,
                                        int limit = kDefaultPartitionLimit) {
    PartitionLevels out;
    out.levels.push_back(trivial_level_zero());
    for (int m = 1; m <= n; ++m) out.levels.push_back(partition_distribution(model, m, limit));
    return out;
}

/// First adjacent pair of levels that is not exactly sampling-consistent,
/// or nullopt when the whole family is consistent.
struct ConsistencyFailure {
    int upper_level;
    Rational residual;
};

inline std::optional<ConsistencyFailure> find_consistency_failure(const PartitionLevels& levels) {
    for (int m = 1; m + 1 <= levels.max_weight(); ++m) {
        Rational r = consistency_residual(levels.at(m + 1), levels.at(m));
        if (r != 0) return ConsistencyFailure{m + 1, std::move(r)};
    }
    return std::nullopt;
}

inline void require_sampling_consistent(const PartitionLevels& levels, const char* who) {
    for (int m = 1; m <= levels.max_weight(); ++m) {
        const PartitionDistribution& dist = levels.at(m);
        if (dist.n != m)
            throw validation_error(std::string(who) + ": level " + std::to_string(m) +
                                   " holds partitions of " + std::to_string(dist.n));
        for (const auto& [lambda, p] : dist.probs)
            if (p < 0)
                throw validation_error(std::string(who) + ": negative probability at " +
                                       lambda.to_string());
        if (dist.total() != 1)
            throw validation_error(std::string(who) + ": level " + std::to_string(m) +
                                   " does not sum to 1");
    }
    if (auto failure = find_consistency_failure(levels))
        throw validation_error(std::string(who) + ": input levels are not sampling-consistent (level " +
                               std::to_string(failure->upper_level) + ", residual " +
                               to_string(failure->residual) + ")");
}

} // namespace regen

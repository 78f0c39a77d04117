#pragma once

/**
 * @file decrement.hpp
 * @brief Decrement matrices and the bijection between them and regenerative
 *        structures.
 *
 * A decrement matrix q(m, j), 1 <= j <= m <= n, gives for each level m the
 * law of the first (deleted) part. One row at the top level determines the
 * whole triangle through the hypergeometric projection, and the triangle
 * determines the composition law as a product over parts (a residual
 * allocation model) and the partition law as a sum of that product over the
 * distinct orderings of the parts. The inverse direction recovers q(n, .)
 * from the partition probabilities of hook-shaped partitions, and either
 * reports the unique candidate row or a witness showing that no decrement
 * row can reproduce the input structure.
 */

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "regen/eppf.hpp"
#include "regen/partition.hpp"
#include "regen/random.hpp"
#include "regen/rational.hpp"

namespace regen {

/// Law of the deleted part at one level: q[x-1] = q(n, x).
/// Entries may be negative on rows produced by inversion diagnostics;
/// validate() enforces an exact probability distribution.
struct DecrementRow {
    int n = 0;
    std::vector<Rational> q;

    static DecrementRow uniform(int n) {
        DecrementRow row;
        row.n = n;
        row.q.assign(static_cast<std::size_t>(n), Rational(1, n));
        return row;
    }

    const Rational& at(int x) const { return q.at(static_cast<std::size_t>(x) - 1); }

    Rational sum() const {
        Rational s = 0;
        for (const Rational& v : q) s += v;
        return s;
    }

    bool is_distribution() const {
        for (const Rational& v : q)
            if (v < 0) return false;
        return static_cast<int>(q.size()) == n && sum() == 1;
    }

    void validate(const char* who) const {
        if (static_cast<int>(q.size()) != n)
            throw validation_error(std::string(who) + ": row length does not match level");
        for (const Rational& v : q)
            if (v < 0) throw validation_error(std::string(who) + ": negative decrement entry");
        if (sum() != 1) throw validation_error(std::string(who) + ": row does not sum to 1");
    }
};

/// Rows for every level 1..n_max.
struct DecrementMatrix {
    std::vector<DecrementRow> rows; // rows[m-1] is the level-m row

    int n_max() const { return static_cast<int>(rows.size()); }

    const DecrementRow& row(int m) const { return rows.at(static_cast<std::size_t>(m) - 1); }

    const Rational& at(int m, int x) const { return row(m).at(x); }
};

/// Law of the deleted-part count seen by a subsample of size m: a
/// hypergeometric mixture of the level-n row, conditioned on the sample
/// hitting the deleted box at all. The conditioning event always has
/// positive probability since every deleted part has size >= 1.
inline DecrementRow hypgeom_project(const DecrementRow& top, int m) {
    const int n = top.n;
    if (m < 1 || m > n) throw std::domain_error("hypgeom_project: level out of range");
    const Int cnm = binomial(n, m);
    std::vector<Rational> mixture(static_cast<std::size_t>(m) + 1, Rational(0));
    for (int x = 1; x <= n; ++x) {
        for (int k = 0; k <= m; ++k) {
            const Int ways = binomial(n - x, m - k) * binomial(x, k);
            if (ways != 0) mixture[static_cast<std::size_t>(k)] += top.at(x) * Rational(ways, cnm);
        }
    }
    DecrementRow out;
    out.n = m;
    out.q.reserve(static_cast<std::size_t>(m));
    const Rational hit = 1 - mixture[0];
    for (int k = 1; k <= m; ++k) out.q.push_back(mixture[static_cast<std::size_t>(k)] / hit);
    return out;
}

/// The full triangle determined by one top row.
inline DecrementMatrix full_matrix(const DecrementRow& top) {
    top.validate("full_matrix");
    DecrementMatrix out;
    out.rows.reserve(static_cast<std::size_t>(top.n));
    for (int m = 1; m <= top.n; ++m) out.rows.push_back(hypgeom_project(top, m));
    return out;
}

/// Product law of the residual allocation model:
/// prod_j q(c_j + ... + c_l, c_j).
inline Rational composition_probability(const DecrementMatrix& matrix, const Composition& c) {
    if (c.weight() > matrix.n_max())
        throw std::domain_error("composition_probability: composition exceeds matrix levels");
    Rational p = 1;
    int remaining = c.weight();
    for (std::size_t j = 0; j < c.size(); ++j) {
        p *= matrix.at(remaining, c[j]);
        remaining -= c[j];
    }
    return p;
}

/// Sum of the composition law over the distinct orderings of the parts.
inline Rational partition_probability(const DecrementMatrix& matrix, const Partition& lambda) {
    if (lambda.weight() > matrix.n_max())
        throw std::domain_error("partition_probability: partition exceeds matrix levels");
    std::vector<int> parts = lambda.ranked();
    std::sort(parts.begin(), parts.end());
    Rational p = 0;
    do {
        p += composition_probability(matrix, Composition(parts));
    } while (std::next_permutation(parts.begin(), parts.end()));
    return p;
}

struct CompositionDistribution {
    int n = 0;
    std::map<Composition, Rational> probs;

    Rational at(const Composition& c) const {
        auto it = probs.find(c);
        return it == probs.end() ? Rational(0) : it->second;
    }

    Rational total() const {
        Rational s = 0;
        for (const auto& [c, p] : probs) s += p;
        return s;
    }
};

inline CompositionDistribution composition_distribution(const DecrementMatrix& matrix, int n,
                                                        int limit = kDefaultCompositionLimit) {
    CompositionDistribution out;
    out.n = n;
    for (const Composition& c : enumerate_compositions(n, limit)) {
        Rational p = composition_probability(matrix, c);
        if (p != 0) out.probs.emplace(c, std::move(p));
    }
    return out;
}

inline PartitionLevels levels_from_matrix(const DecrementMatrix& matrix,
                                          int limit = kDefaultPartitionLimit) {
    PartitionLevels out;
    out.levels.push_back(trivial_level_zero());
    for (int m = 1; m <= matrix.n_max(); ++m) {
        PartitionDistribution dist;
        dist.n = m;
        for (const Partition& lambda : enumerate_partitions(m, limit)) {
            Rational p = partition_probability(matrix, lambda);
            if (p != 0) dist.probs.emplace(lambda, std::move(p));
        }
        out.levels.push_back(std::move(dist));
    }
    return out;
}

/// Image of a composition law under deletion of one uniformly chosen ball
/// (a unit leaves box i with probability c_i / n; empty boxes vanish).
/// For laws generated by a decrement matrix this reproduces the level-(n-1)
/// law exactly.
inline CompositionDistribution composition_project_one_level(const CompositionDistribution& dist) {
    if (dist.n < 1) throw std::domain_error("composition_project_one_level: empty level");
    CompositionDistribution out;
    out.n = dist.n - 1;
    for (const auto& [c, p] : dist.probs) {
        for (std::size_t i = 0; i < c.size(); ++i) {
            std::vector<int> parts;
            parts.reserve(c.size());
            for (std::size_t j = 0; j < c.size(); ++j) {
                const int v = c[j] - (j == i ? 1 : 0);
                if (v > 0) parts.push_back(v);
            }
            out.probs[Composition(parts)] += p * Rational(c[i], dist.n);
        }
    }
    return out;
}

/// One draw of the residual allocation model: the first part follows the
/// level-n row, each further part follows the row at the remaining weight.
inline Composition sample_composition(const DecrementMatrix& matrix, int n, RandomGenerator& gen) {
    if (n < 1 || n > matrix.n_max())
        throw std::domain_error("sample_composition: level outside matrix range");
    std::vector<int> parts;
    int remaining = n;
    while (remaining > 0) {
        const DecrementRow& row = matrix.row(remaining);
        const int x = static_cast<int>(gen.categorical(row.q)) + 1;
        parts.push_back(x);
        remaining -= x;
    }
    return Composition(parts);
}

/// Evidence that no decrement row generates the given structure.
struct NotRegenerativeWitness {
    int level = 0;
    Partition lambda;
    int part = 0; // 0 when the witness concerns a whole row or distribution
    Rational value;
    std::string reason;

    std::string describe() const {
        std::string s = reason + " (level " + std::to_string(level);
        if (!lambda.empty()) s += ", partition " + lambda.to_string();
        if (part > 0) s += ", part " + std::to_string(part);
        s += ", value " + to_string(value) + ")";
        return s;
    }
};

struct InversionOutcome {
    std::optional<DecrementRow> row;
    std::optional<NotRegenerativeWitness> witness;

    bool ok() const { return row.has_value(); }
};

/**
 * Recovers the candidate deleted-part law q(n, .) from the partition
 * probabilities, using only hook-shaped partitions:
 *
 *   q(m, 1) = p(1^m) / p(1^(m-1)),   q(m, m) = p((m)),
 *
 * and for 1 < x < m the mass of (x, 1^(m-x)) expanded over the position of
 * the part x in deletion order, in which the unknown q(m, x) appears exactly
 * once with coefficient p(1^(m-x)). Rows are produced for every level from
 * the bottom up and validated as they appear; the first negative entry,
 * entry above 1, failed row sum, or vanishing divisor yields a
 * NotRegenerative witness instead of a row.
 */
inline InversionOutcome invert_p_to_q(const PartitionLevels& levels) {
    require_sampling_consistent(levels, "invert_p_to_q");
    const int n = levels.max_weight();
    if (n < 1) throw validation_error("invert_p_to_q: no levels");

    // Distinguished one-block branch: no singletons anywhere.
    if (n >= 2 && levels.at(2).at(Partition{1, 1}) == 0) {
        DecrementRow row;
        row.n = n;
        row.q.assign(static_cast<std::size_t>(n), Rational(0));
        row.q.back() = 1;
        return {row, std::nullopt};
    }

    std::vector<Rational> all_singletons(static_cast<std::size_t>(n) + 1); // p(1^m)
    all_singletons[0] = 1;
    for (int m = 1; m <= n; ++m)
        all_singletons[static_cast<std::size_t>(m)] =
            levels.at(m).at(Partition(std::vector<int>(static_cast<std::size_t>(m), 1)));

    std::vector<DecrementRow> rows; // rows[m-1]
    for (int m = 1; m <= n; ++m) {
        DecrementRow row;
        row.n = m;
        row.q.assign(static_cast<std::size_t>(m), Rational(0));

        auto hook = [m](int x) {
            std::vector<int> parts(static_cast<std::size_t>(m - x), 1);
            parts.insert(parts.begin(), x);
            return Partition(parts);
        };

        if (m == 1) {
            row.q[0] = 1;
        } else {
            if (all_singletons[static_cast<std::size_t>(m - 1)] == 0)
                return {std::nullopt,
                        NotRegenerativeWitness{
                            m - 1, Partition(std::vector<int>(static_cast<std::size_t>(m - 1), 1)), 0,
                            Rational(0), "vanishing all-singleton probability leaves the deleted-size law undetermined"}};
            row.q[0] = all_singletons[static_cast<std::size_t>(m)] /
                       all_singletons[static_cast<std::size_t>(m - 1)];
            row.q[static_cast<std::size_t>(m) - 1] = levels.at(m).at(Partition::single(m));
            for (int x = 2; x <= m - 1; ++x) {
                if (all_singletons[static_cast<std::size_t>(m - x)] == 0)
                    return {std::nullopt,
                            NotRegenerativeWitness{
                                m - x, Partition(std::vector<int>(static_cast<std::size_t>(m - x), 1)),
                                0, Rational(0),
                                "vanishing all-singleton probability leaves the deleted-size law undetermined"}};
                const int ell = m - x + 1;
                Rational acc = levels.at(m).at(hook(x));
                Rational prefix = row.q[0]; // q(m, 1)
                for (int i = 2; i <= ell; ++i) {
                    if (i > 2) prefix *= rows[static_cast<std::size_t>(m - i + 2) - 1].at(1);
                    acc -= prefix * rows[static_cast<std::size_t>(m - i + 1) - 1].at(x) *
                           all_singletons[static_cast<std::size_t>(m - i + 1 - x)];
                }
                row.q[static_cast<std::size_t>(x) - 1] =
                    acc / all_singletons[static_cast<std::size_t>(m - x)];
            }
        }

        for (int x = 1; x <= m; ++x) {
            if (row.at(x) < 0)
                return {std::nullopt, NotRegenerativeWitness{m, hook(x), x, row.at(x),
                                                             "negative decrement entry"}};
            if (row.at(x) > 1)
                return {std::nullopt, NotRegenerativeWitness{m, hook(x), x, row.at(x),
                                                             "decrement entry exceeds 1"}};
        }
        if (Rational s = row.sum(); s != 1)
            return {std::nullopt,
                    NotRegenerativeWitness{m, Partition(), 0, s, "decrement row does not sum to 1"}};
        rows.push_back(std::move(row));
    }
    return {std::move(rows.back()), std::nullopt};
}

struct RegenerativityVerdict {
    std::optional<DecrementMatrix> matrix;
    std::optional<NotRegenerativeWitness> witness;

    bool regenerative() const { return matrix.has_value(); }
};

/// Decides whether the structure is regenerative under some deletion rule:
/// inverts to the candidate row, rebuilds the full triangle, regenerates the
/// partition law at every level and compares it exactly with the input.
inline RegenerativityVerdict regenerativity_check(const PartitionLevels& levels) {
    InversionOutcome inversion = invert_p_to_q(levels);
    if (!inversion.ok()) return {std::nullopt, inversion.witness};
    DecrementMatrix matrix = full_matrix(*inversion.row);
    for (int m = 1; m <= levels.max_weight(); ++m) {
        for (const Partition& lambda : enumerate_partitions(m)) {
            const Rational regenerated = partition_probability(matrix, lambda);
            const Rational given = levels.at(m).at(lambda);
            if (regenerated != given)
                return {std::nullopt,
                        NotRegenerativeWitness{m, lambda, 0, regenerated - given,
                                               "regenerated partition law differs from input"}};
        }
    }
    return {std::move(matrix), std::nullopt};
}

/// Closed form of the deleted-part law of the (alpha, theta) structure:
///   q(n, m) = C(n,m) (1-alpha)_{m-1,1} (theta)_{n-m,1} ((n-m) alpha + m theta)
///             / (n (theta)_{n,1}),
/// with the theta = 0 case taken as the limit after cancelling the leading
/// theta. The doubly degenerate (0, 0) pair is rejected.
inline DecrementRow two_param_decrement(const Rational& alpha, const Rational& theta, int n) {
    if (alpha < 0 || alpha > 1 || theta < 0)
        throw std::domain_error("two_param_decrement: parameters outside range");
    if (alpha == 0 && theta == 0)
        throw std::domain_error("two_param_decrement: (0,0) is degenerate");
    if (n < 1) throw std::domain_error("two_param_decrement: n must be positive");
    DecrementRow row;
    row.n = n;
    row.q.reserve(static_cast<std::size_t>(n));
    for (int m = 1; m <= n; ++m) {
        Rational v;
        if (theta == 0) {
            if (m < n)
                v = Rational(binomial(n, m)) * rising_factorial(1 - alpha, m - 1, 1) *
                    Rational(factorial(n - m - 1)) * (n - m) * alpha /
                    (n * Rational(factorial(n - 1)));
            else
                v = rising_factorial(1 - alpha, n - 1, 1) / Rational(factorial(n - 1));
        } else {
            v = Rational(binomial(n, m)) * rising_factorial(1 - alpha, m - 1, 1) *
                rising_factorial(theta, n - m, 1) * ((n - m) * alpha + m * theta) /
                (n * rising_factorial(theta, n, 1));
        }
        row.q.push_back(std::move(v));
    }
    return row;
}

inline DecrementRow two_param_decrement(const TwoParamModel& model, int n) {
    return two_param_decrement(model.alpha(), model.theta(), n);
}

} // namespace regen

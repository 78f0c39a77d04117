#pragma once

/**
 * @file chains.hpp
 * @brief The q(n,.)-chains on fragmented permutations, compositions and
 *        partitions: one-step simulation, exact transition matrices, exact
 *        stationary laws, and the product-form checks on the richest chain.
 *
 * One step of the chain draws a size x from q(n,.), extracts x balls
 * (an ordered uniform x-subset), and opens a new leftmost box holding them;
 * surviving balls keep their relative order and empty boxes vanish. Ignoring
 * ball labels projects the chain onto compositions; further ignoring box
 * order projects it onto partitions. Each projection is an exact
 * push-forward of transition matrices, which pushforward_check verifies
 * entry by entry.
 */

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "regen/decrement.hpp"
#include "regen/linalg.hpp"
#include "regen/partition.hpp"
#include "regen/random.hpp"
#include "regen/rational.hpp"

namespace regen {

inline constexpr int kCompositionChainLimit = 10;
inline constexpr int kPartitionChainLimit = 12;
inline constexpr int kFragPermChainLimit = 5;

/// Balls of [n] arranged left to right and cut into boxes.
struct FragmentedPermutation {
    std::vector<int> order; // ball labels, a permutation of 1..n
    Composition boxes;      // box sizes, summing to n

    static FragmentedPermutation validated(std::vector<int> order, Composition boxes) {
        FragmentedPermutation f{std::move(order), std::move(boxes)};
        if (f.boxes.weight() != static_cast<int>(f.order.size()))
            throw validation_error("FragmentedPermutation: box sizes do not sum to ball count");
        std::vector<int> sorted = f.order;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size(); ++i)
            if (sorted[i] != static_cast<int>(i) + 1)
                throw validation_error("FragmentedPermutation: order is not a permutation of 1..n");
        return f;
    }

    bool operator==(const FragmentedPermutation&) const = default;
    auto operator<=>(const FragmentedPermutation&) const = default;

    std::string to_string() const {
        std::string s;
        std::size_t pos = 0;
        for (std::size_t b = 0; b < boxes.size(); ++b) {
            if (b) s += '|';
            for (int i = 0; i < boxes[b]; ++i) {
                if (i) s += ',';
                s += std::to_string(order[pos++]);
            }
        }
        return s;
    }
};

/// Finite chain with exact transition probabilities; rows are sparse and
/// each sums to exactly 1.
template <class State>
struct ExactChain {
    int n = 0;
    DecrementRow q;
    std::vector<State> states;
    std::map<State, int> index;
    std::vector<SparseRow> rows;

    int state_index(const State& s) const {
        auto it = index.find(s);
        if (it == index.end()) throw validation_error("ExactChain: unknown state");
        return it->second;
    }
};

namespace detail {

/// Calls visit(removal_counts, ways) for every way to remove exactly x balls
/// from boxes of the given sizes, where ways = prod_i C(c_i, k_i).
template <class Visit>
void for_each_removal(const std::vector<int>& sizes, int x, Visit&& visit) {
    std::vector<int> counts(sizes.size(), 0);
    auto rec = [&](auto&& self, std::size_t box, int left, Int ways) -> void {
        if (box == sizes.size()) {
            if (left == 0) visit(counts, ways);
            return;
        }
        int tail = 0;
        for (std::size_t b = box; b < sizes.size(); ++b) tail += sizes[b];
        if (left > tail) return;
        for (int k = 0; k <= std::min(sizes[box], left); ++k) {
            counts[box] = k;
            self(self, box + 1, left - k, ways * binomial(sizes[box], k));
        }
        counts[box] = 0;
    };
    rec(rec, 0, x, Int(1));
}

inline Composition after_removal(const Composition& c, int x, const std::vector<int>& counts) {
    std::vector<int> parts;
    parts.reserve(c.size() + 1);
    parts.push_back(x);
    for (std::size_t i = 0; i < c.size(); ++i)
        if (c[i] - counts[i] > 0) parts.push_back(c[i] - counts[i]);
    return Composition(parts);
}

template <class State>
SparseRow to_sparse(const std::map<State, Rational>& mass, const std::map<State, int>& index) {
    SparseRow row;
    row.reserve(mass.size());
    for (const auto& [state, p] : mass)
        if (p != 0) row.emplace_back(index.at(state), p);
    std::sort(row.begin(), row.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return row;
}

/// Calls visit(sequence) for every ordered x-tuple of distinct balls of [n].
template <class Visit>
void for_each_sequence(int n, int x, Visit&& visit) {
    std::vector<int> seq;
    std::vector<bool> taken(static_cast<std::size_t>(n) + 1, false);
    auto rec = [&](auto&& self) -> void {
        if (static_cast<int>(seq.size()) == x) {
            visit(seq);
            return;
        }
        for (int b = 1; b <= n; ++b) {
            if (taken[static_cast<std::size_t>(b)]) continue;
            taken[static_cast<std::size_t>(b)] = true;
            seq.push_back(b);
            self(self);
            seq.pop_back();
            taken[static_cast<std::size_t>(b)] = false;
        }
    };
    rec(rec);
}

inline FragmentedPermutation move_to_new_box(const FragmentedPermutation& st,
                                             const std::vector<int>& sequence) {
    const int n = static_cast<int>(st.order.size());
    std::vector<bool> removed(static_cast<std::size_t>(n) + 1, false);
    for (int b : sequence) removed[static_cast<std::size_t>(b)] = true;

    std::vector<int> order = sequence;
    order.reserve(st.order.size());
    for (int b : st.order)
        if (!removed[static_cast<std::size_t>(b)]) order.push_back(b);

    std::vector<int> parts;
    parts.push_back(static_cast<int>(sequence.size()));
    std::size_t pos = 0;
    for (std::size_t b = 0; b < st.boxes.size(); ++b) {
        int kept = 0;
        for (int i = 0; i < st.boxes[b]; ++i)
            if (!removed[static_cast<std::size_t>(st.order[pos++])]) ++kept;
        if (kept > 0) parts.push_back(kept);
    }
    return FragmentedPermutation{std::move(order), Composition(parts)};
}

} // namespace detail

inline ExactChain<Composition> composition_chain(int n, const DecrementRow& q_row,
                                                 int limit = kCompositionChainLimit) {
    if (n > limit)
        throw limit_error("composition_chain: n=" + std::to_string(n) + " exceeds limit " +
                          std::to_string(limit));
    if (q_row.n != n) throw validation_error("composition_chain: row level mismatch");
    q_row.validate("composition_chain");

    ExactChain<Composition> chain;
    chain.n = n;
    chain.q = q_row;
    chain.states = enumerate_compositions(n, limit);
    for (std::size_t i = 0; i < chain.states.size(); ++i)
        chain.index.emplace(chain.states[i], static_cast<int>(i));
    chain.rows.reserve(chain.states.size());
    for (const Composition& c : chain.states) {
        std::map<Composition, Rational> mass;
        for (int x = 1; x <= n; ++x) {
            if (q_row.at(x) == 0) continue;
            const Rational scale = q_row.at(x) / Rational(binomial(n, x));
            detail::for_each_removal(c.parts(), x, [&](const std::vector<int>& counts, const Int& ways) {
                mass[detail::after_removal(c, x, counts)] += scale * Rational(ways);
            });
        }
        chain.rows.push_back(detail::to_sparse(mass, chain.index));
    }
    return chain;
}

inline ExactChain<Partition> partition_chain(int n, const DecrementRow& q_row,
                                             int limit = kPartitionChainLimit) {
    if (n > limit)
        throw limit_error("partition_chain: n=" + std::to_string(n) + " exceeds limit " +
                          std::to_string(limit));
    if (q_row.n != n) throw validation_error("partition_chain: row level mismatch");
    q_row.validate("partition_chain");

    ExactChain<Partition> chain;
    chain.n = n;
    chain.q = q_row;
    chain.states = enumerate_partitions(n, limit);
    for (std::size_t i = 0; i < chain.states.size(); ++i)
        chain.index.emplace(chain.states[i], static_cast<int>(i));
    chain.rows.reserve(chain.states.size());
    for (const Partition& lambda : chain.states) {
        const Composition canonical(lambda.ranked());
        std::map<Partition, Rational> mass;
        for (int x = 1; x <= n; ++x) {
            if (q_row.at(x) == 0) continue;
            const Rational scale = q_row.at(x) / Rational(binomial(n, x));
            detail::for_each_removal(canonical.parts(), x,
                                     [&](const std::vector<int>& counts, const Int& ways) {
                                         mass[rank(detail::after_removal(canonical, x, counts))] +=
                                             scale * Rational(ways);
                                     });
        }
        chain.rows.push_back(detail::to_sparse(mass, chain.index));
    }
    return chain;
}

inline ExactChain<FragmentedPermutation> fragperm_chain(int n, const DecrementRow& q_row,
                                                        int limit = kFragPermChainLimit) {
    if (n > limit)
        throw limit_error("fragperm_chain: n=" + std::to_string(n) + " exceeds limit " +
                          std::to_string(limit));
    if (q_row.n != n) throw validation_error("fragperm_chain: row level mismatch");
    q_row.validate("fragperm_chain");

    ExactChain<FragmentedPermutation> chain;
    chain.n = n;
    chain.q = q_row;
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 1);
    const std::vector<Composition> cuts = enumerate_compositions(n, kFragPermChainLimit);
    do {
        for (const Composition& cut : cuts)
            chain.states.push_back(FragmentedPermutation{perm, cut});
    } while (std::next_permutation(perm.begin(), perm.end()));
    std::sort(chain.states.begin(), chain.states.end());
    for (std::size_t i = 0; i < chain.states.size(); ++i)
        chain.index.emplace(chain.states[i], static_cast<int>(i));

    chain.rows.reserve(chain.states.size());
    for (const FragmentedPermutation& st : chain.states) {
        std::map<FragmentedPermutation, Rational> mass;
        for (int x = 1; x <= n; ++x) {
            if (q_row.at(x) == 0) continue;
            Int sequences = 1;
            for (int i = 0; i < x; ++i) sequences *= n - i;
            const Rational each = q_row.at(x) / Rational(sequences);
            detail::for_each_sequence(n, x, [&](const std::vector<int>& seq) {
                mass[detail::move_to_new_box(st, seq)] += each;
            });
        }
        chain.rows.push_back(detail::to_sparse(mass, chain.index));
    }
    return chain;
}

/// Exact stationary law, solved globally; unique even when some states are
/// transient.
template <class State>
std::map<State, Rational> stationary(const ExactChain<State>& chain) {
    const std::vector<Rational> pi = stationary_vector(chain.rows);
    std::map<State, Rational> out;
    for (std::size_t i = 0; i < chain.states.size(); ++i) out.emplace(chain.states[i], pi[i]);
    return out;
}

/// One step of the chain on compositions: draw x, then remove a multivariate
/// hypergeometric count from each box (sampled box by box), and open a new
/// leftmost box of size x.
inline Composition step_composition(const Composition& c, const DecrementRow& q_row,
                                    RandomGenerator& gen) {
    if (q_row.n != c.weight()) throw validation_error("step_composition: row level mismatch");
    q_row.validate("step_composition");
    const int n = c.weight();
    const int x = static_cast<int>(gen.categorical(q_row.q)) + 1;
    std::vector<int> counts(c.size(), 0);
    int pool = n;
    int need = x;
    for (std::size_t i = 0; i < c.size() && need > 0; ++i) {
        const int rest = pool - c[i];
        const int lo = std::max(0, need - rest);
        const int hi = std::min(c[i], need);
        std::vector<Rational> weights;
        weights.reserve(static_cast<std::size_t>(hi - lo) + 1);
        for (int k = lo; k <= hi; ++k)
            weights.emplace_back(binomial(c[i], k) * binomial(rest, need - k));
        counts[i] = lo + static_cast<int>(gen.categorical(weights));
        pool -= c[i];
        need -= counts[i];
    }
    return detail::after_removal(c, x, counts);
}

/// One step of the chain on partitions, realized through any composition
/// arrangement of the parts (the projected law does not depend on it).
inline Partition step_partition(const Partition& lambda, const DecrementRow& q_row,
                                RandomGenerator& gen) {
    return rank(step_composition(Composition(lambda.ranked()), q_row, gen));
}

/// One step of the chain on fragmented permutations: draw x, draw an ordered
/// uniform x-subset of balls, move them into a new leftmost box.
inline FragmentedPermutation step_fragperm(const FragmentedPermutation& st,
                                           const DecrementRow& q_row, RandomGenerator& gen) {
    const int n = static_cast<int>(st.order.size());
    if (q_row.n != n) throw validation_error("step_fragperm: row level mismatch");
    q_row.validate("step_fragperm");
    const int x = static_cast<int>(gen.categorical(q_row.q)) + 1;
    std::vector<int> balls(static_cast<std::size_t>(n));
    std::iota(balls.begin(), balls.end(), 1);
    for (int i = 0; i < x; ++i) {
        const std::size_t j =
            static_cast<std::size_t>(i) + static_cast<std::size_t>(gen.below(static_cast<std::uint64_t>(n - i)));
        std::swap(balls[static_cast<std::size_t>(i)], balls[j]);
    }
    balls.resize(static_cast<std::size_t>(x));
    return detail::move_to_new_box(st, balls);
}

/// Product-form facts of the stationary law of the chain on fragmented
/// permutations, verified exactly from the solved stationary vector.
struct ProductFormReport {
    int n = 0;
    std::size_t state_count = 0;
    Rational permutation_probability;        // common value 1/n!
    CompositionDistribution composition_law; // equals the residual allocation law
};

/**
 * Solves the fragmented-permutation chain exactly and checks, as exact
 * identities: the permutation marginal is uniform, the composition marginal
 * is the law generated by q, and the two marginals are independent. Any
 * failure is an invariant violation naming the offending state.
 */
inline ProductFormReport verify_l1(int n, const DecrementRow& q_row,
                                   int limit = kFragPermChainLimit) {
    const ExactChain<FragmentedPermutation> chain = fragperm_chain(n, q_row, limit);
    const std::vector<Rational> pi = stationary_vector(chain.rows);

    std::map<std::vector<int>, Rational> perm_marginal;
    std::map<Composition, Rational> comp_marginal;
    for (std::size_t i = 0; i < chain.states.size(); ++i) {
        perm_marginal[chain.states[i].order] += pi[i];
        comp_marginal[chain.states[i].boxes] += pi[i];
    }

    const Rational uniform(1, factorial(n));
    if (perm_marginal.size() != static_cast<std::size_t>(factorial(n)))
        throw invariant_violation("verify_l1: permutation marginal misses permutations");
    for (const auto& [order, p] : perm_marginal)
        if (p != uniform) {
            std::string desc;
            for (int b : order) desc += std::to_string(b) + ',';
            throw invariant_violation("verify_l1: permutation marginal not uniform at " + desc);
        }

    const CompositionDistribution law =
        composition_distribution(full_matrix(q_row), n, std::max(n, kDefaultCompositionLimit));
    for (const Composition& c : enumerate_compositions(n, std::max(n, kDefaultCompositionLimit))) {
        auto it = comp_marginal.find(c);
        const Rational got = it == comp_marginal.end() ? Rational(0) : it->second;
        if (got != law.at(c))
            throw invariant_violation("verify_l1: composition marginal differs at " + c.to_string());
    }

    for (std::size_t i = 0; i < chain.states.size(); ++i) {
        const auto& st = chain.states[i];
        Rational product = perm_marginal[st.order];
        auto it = comp_marginal.find(st.boxes);
        product *= it == comp_marginal.end() ? Rational(0) : it->second;
        if (pi[i] != product)
            throw invariant_violation("verify_l1: marginals not independent at " + st.to_string());
    }

    ProductFormReport report;
    report.n = n;
    report.state_count = chain.states.size();
    report.permutation_probability = uniform;
    report.composition_law = law;
    return report;
}

struct PushforwardReport {
    int n = 0;
    std::size_t fragperm_states = 0;
    std::size_t composition_states = 0;
    std::size_t partition_states = 0;
};

/**
 * Checks algebraically that projecting states commutes with the transition
 * matrices: aggregating the fragmented-permutation rows by box sizes
 * reproduces the composition chain, and aggregating composition rows by
 * ranking reproduces the partition chain.
 */
inline PushforwardReport pushforward_check(int n, const DecrementRow& q_row,
                                           int limit = kFragPermChainLimit) {
    const ExactChain<FragmentedPermutation> fp = fragperm_chain(n, q_row, limit);
    const ExactChain<Composition> comp = composition_chain(n, q_row);
    const ExactChain<Partition> part = partition_chain(n, q_row);

    for (std::size_t i = 0; i < fp.states.size(); ++i) {
        std::map<Composition, Rational> aggregated;
        for (const auto& [j, p] : fp.rows[i]) aggregated[fp.states[static_cast<std::size_t>(j)].boxes] += p;
        std::map<Composition, Rational> expected;
        for (const auto& [j, p] : comp.rows[static_cast<std::size_t>(comp.state_index(fp.states[i].boxes))])
            expected[comp.states[static_cast<std::size_t>(j)]] = p;
        if (aggregated != expected)
            throw invariant_violation("pushforward_check: fragperm row " + fp.states[i].to_string() +
                                      " does not project onto the composition chain");
    }

    for (std::size_t i = 0; i < comp.states.size(); ++i) {
        std::map<Partition, Rational> aggregated;
        for (const auto& [j, p] : comp.rows[i]) aggregated[rank(comp.states[static_cast<std::size_t>(j)])] += p;
        std::map<Partition, Rational> expected;
        for (const auto& [j, p] : part.rows[static_cast<std::size_t>(part.state_index(rank(comp.states[i])))])
            expected[part.states[static_cast<std::size_t>(j)]] = p;
        if (aggregated != expected)
            throw invariant_violation("pushforward_check: composition row " +
                                      comp.states[i].to_string() +
                                      " does not project onto the partition chain");
    }

    return PushforwardReport{n, fp.states.size(), comp.states.size(), part.states.size()};
}

} // namespace regen

#include <catch2/catch_amalgamated.hpp>

#include <numeric>
#include <vector>

#include "regen/chains.hpp"

using namespace regen;

namespace {

DecrementRow random_row(int n, RandomGenerator& gen) {
    std::vector<Rational> weights;
    Rational total = 0;
    for (int i = 0; i < n; ++i) {
        const Rational w(1 + gen.below(12), 1 + gen.below(12));
        weights.push_back(w);
        total += w;
    }
    DecrementRow row;
    row.n = n;
    for (Rational& w : weights) row.q.push_back(w / total);
    return row;
}

template <class State>
Rational row_sum(const ExactChain<State>& chain, std::size_t i) {
    Rational s = 0;
    for (const auto& [j, p] : chain.rows[i]) s += p;
    return s;
}

/// pi P evaluated through the sparse rows.
template <class State>
std::vector<Rational> step_distribution(const ExactChain<State>& chain,
                                        const std::vector<Rational>& pi) {
    std::vector<Rational> out(pi.size(), Rational(0));
    for (std::size_t i = 0; i < pi.size(); ++i)
        for (const auto& [j, p] : chain.rows[i]) out[static_cast<std::size_t>(j)] += pi[i] * p;
    return out;
}

/// Reachability in exactly `steps` steps, via boolean matrix powers.
template <class State>
bool reachable_from_everywhere(const ExactChain<State>& chain, const State& target, int steps) {
    const std::size_t n = chain.states.size();
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) reach[i][i] = true;
    for (int s = 0; s < steps; ++s) {
        std::vector<std::vector<bool>> next(n, std::vector<bool>(n, false));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) {
                if (!reach[i][k]) continue;
                for (const auto& [j, p] : chain.rows[k]) next[i][static_cast<std::size_t>(j)] = true;
            }
        reach = std::move(next);
    }
    const int target_index = chain.index.at(target);
    for (std::size_t i = 0; i < n; ++i)
        if (!reach[i][static_cast<std::size_t>(target_index)]) return false;
    return true;
}

} // namespace

TEST_CASE("one-step law of the composition chain", "[chains]") {
    const ExactChain<Composition> chain = composition_chain(3, DecrementRow::uniform(3));
    REQUIRE(chain.states.size() == 4);
    for (std::size_t i = 0; i < chain.states.size(); ++i) CHECK(row_sum(chain, i) == 1);

    auto row_of = [&](const Composition& c) {
        std::map<Composition, Rational> out;
        for (const auto& [j, p] : chain.rows[static_cast<std::size_t>(chain.state_index(c))])
            out[chain.states[static_cast<std::size_t>(j)]] = p;
        return out;
    };

    const auto from_block = row_of(Composition{3});
    CHECK(from_block.at(Composition{3}) == Rational(1, 3));
    CHECK(from_block.at(Composition{2, 1}) == Rational(1, 3));
    CHECK(from_block.at(Composition{1, 2}) == Rational(1, 3));
    CHECK(from_block.find(Composition{1, 1, 1}) == from_block.end());

    const auto from_21 = row_of(Composition{2, 1});
    CHECK(from_21.at(Composition{1, 1, 1}) == Rational(2, 9));
    CHECK(from_21.at(Composition{1, 2}) == Rational(1, 9));
    CHECK(from_21.at(Composition{2, 1}) == Rational(1, 3));
    CHECK(from_21.at(Composition{3}) == Rational(1, 3));
}

TEST_CASE("one-step law of the partition chain", "[chains]") {
    const ExactChain<Partition> chain = partition_chain(3, DecrementRow::uniform(3));
    REQUIRE(chain.states.size() == 3);
    const std::size_t from_block = static_cast<std::size_t>(chain.state_index(Partition{3}));
    std::map<Partition, Rational> row;
    for (const auto& [j, p] : chain.rows[from_block])
        row[chain.states[static_cast<std::size_t>(j)]] = p;
    CHECK(row.at(Partition{3}) == Rational(1, 3));
    CHECK(row.at(Partition{2, 1}) == Rational(2, 3));
}

TEST_CASE("fragmented-permutation chain state space", "[chains]") {
    const ExactChain<FragmentedPermutation> chain =
        fragperm_chain(2, DecrementRow{2, {Rational(1, 2), Rational(1, 2)}});
    CHECK(chain.states.size() == 4);
    for (std::size_t i = 0; i < chain.states.size(); ++i) CHECK(row_sum(chain, i) == 1);

    const ExactChain<FragmentedPermutation> chain3 = fragperm_chain(3, DecrementRow::uniform(3));
    CHECK(chain3.states.size() == 24);

    CHECK_THROWS_AS(fragperm_chain(6, DecrementRow::uniform(6)), limit_error);
    CHECK_THROWS_AS(composition_chain(11, DecrementRow::uniform(11)), limit_error);
}

TEST_CASE("moving balls into a new leftmost box", "[chains]") {
    const FragmentedPermutation start =
        FragmentedPermutation::validated({2, 3, 9, 1, 8, 6, 7, 5, 4}, Composition{3, 2, 3, 1});
    const FragmentedPermutation moved = detail::move_to_new_box(start, {7, 4, 8, 1});
    CHECK(moved.order == std::vector<int>{7, 4, 8, 1, 2, 3, 9, 6, 5});
    CHECK(moved.boxes == Composition{4, 3, 2});
    CHECK(moved.to_string() == "7,4,8,1|2,3,9|6,5");
}

TEST_CASE("exact stationary law of a small hand-solved chain", "[chains]") {
    // Two states, P = [[1/2,1/2],[1/4,3/4]]; stationary is (1/3, 2/3).
    std::vector<SparseRow> rows{{{0, Rational(1, 2)}, {1, Rational(1, 2)}},
                                {{0, Rational(1, 4)}, {1, Rational(3, 4)}}};
    const std::vector<Rational> pi = stationary_vector(rows);
    CHECK(pi == std::vector<Rational>{Rational(1, 3), Rational(2, 3)});

    // Two absorbing states: stationary law not unique.
    std::vector<SparseRow> split{{{0, Rational(1)}}, {{1, Rational(1)}}};
    CHECK_THROWS_AS(stationary_vector(split), invariant_violation);
}

TEST_CASE("stationary law of the composition chain is the residual allocation law", "[chains]") {
    const ExactChain<Composition> chain = composition_chain(3, DecrementRow::uniform(3));
    const std::map<Composition, Rational> pi = stationary(chain);
    CHECK(pi.at(Composition{3}) == Rational(1, 3));
    CHECK(pi.at(Composition{2, 1}) == Rational(1, 3));
    CHECK(pi.at(Composition{1, 2}) == Rational(1, 6));
    CHECK(pi.at(Composition{1, 1, 1}) == Rational(1, 6));

    const CompositionDistribution law = composition_distribution(full_matrix(chain.q), 3);
    for (const auto& [c, p] : pi) CHECK(p == law.at(c));
}

TEST_CASE("stationary law of the partition chain matches the ranked law", "[chains]") {
    const ExactChain<Partition> chain = partition_chain(3, DecrementRow::uniform(3));
    const std::map<Partition, Rational> pi = stationary(chain);
    CHECK(pi.at(Partition{3}) == Rational(1, 3));
    CHECK(pi.at(Partition{2, 1}) == Rational(1, 2));
    CHECK(pi.at(Partition{1, 1, 1}) == Rational(1, 6));
    // This is the theta = 1 Ewens law.
    const PartitionDistribution ewens = partition_distribution(TwoParamModel(0, 1), 3);
    for (const auto& [lambda, p] : pi) CHECK(p == ewens.at(lambda));
}

TEST_CASE("fragmented chain at n = 2 has the product-form stationary law", "[chains]") {
    const DecrementRow q{2, {Rational(1, 2), Rational(1, 2)}};
    const ExactChain<FragmentedPermutation> chain = fragperm_chain(2, q);
    const std::map<FragmentedPermutation, Rational> pi = stationary(chain);
    for (const auto& [state, p] : pi) CHECK(p == Rational(1, 4));
}

TEST_CASE("residual allocation law is stationary for every row", "[chains]") {
    RandomGenerator gen(41);
    for (int n = 2; n <= 8; ++n) {
        const DecrementRow row = random_row(n, gen);
        const ExactChain<Composition> chain = composition_chain(n, row);
        const CompositionDistribution law = composition_distribution(full_matrix(row), n);
        std::vector<Rational> pi(chain.states.size());
        for (std::size_t i = 0; i < chain.states.size(); ++i) pi[i] = law.at(chain.states[i]);
        CHECK(step_distribution(chain, pi) == pi);
    }
}

TEST_CASE("ranked law is stationary for the partition chain", "[chains]") {
    RandomGenerator gen(43);
    for (int n = 2; n <= 8; ++n) {
        const DecrementRow row = random_row(n, gen);
        const ExactChain<Partition> chain = partition_chain(n, row);
        const DecrementMatrix matrix = full_matrix(row);
        std::vector<Rational> pi(chain.states.size());
        for (std::size_t i = 0; i < chain.states.size(); ++i)
            pi[i] = partition_probability(matrix, chain.states[i]);
        CHECK(std::accumulate(pi.begin(), pi.end(), Rational(0)) == 1);
        CHECK(step_distribution(chain, pi) == pi);
    }
}

TEST_CASE("single-step samplers match the exact one-step law", "[chains]") {
    // x = n resets to a single box.
    RandomGenerator gen(7);
    DecrementRow reset{3, {Rational(0), Rational(0), Rational(1)}};
    for (int i = 0; i < 10; ++i)
        CHECK(step_composition(Composition{1, 1, 1}, reset, gen) == Composition{3});

    DecrementRow trivial{1, {Rational(1)}};
    CHECK(step_composition(Composition{1}, trivial, gen) == Composition{1});
    const FragmentedPermutation single = FragmentedPermutation::validated({1}, Composition{1});
    CHECK(step_fragperm(single, trivial, gen) == single);

    // x = n moves every ball into one box holding the drawn sequence.
    DecrementRow reset4{4, {Rational(0), Rational(0), Rational(0), Rational(1)}};
    const FragmentedPermutation start =
        FragmentedPermutation::validated({3, 1, 4, 2}, Composition{2, 2});
    for (int i = 0; i < 10; ++i)
        CHECK(step_fragperm(start, reset4, gen).boxes == Composition{4});

    // Empirical one-step distribution from (2,1) under the uniform row.
    const ExactChain<Composition> chain = composition_chain(3, DecrementRow::uniform(3));
    std::map<Composition, Rational> expected;
    for (const auto& [j, p] : chain.rows[static_cast<std::size_t>(chain.state_index(Composition{2, 1}))])
        expected[chain.states[static_cast<std::size_t>(j)]] = p;
    std::map<Composition, std::uint64_t> counts;
    const std::uint64_t draws = 30000;
    RandomGenerator step_gen(1001);
    for (std::uint64_t i = 0; i < draws; ++i)
        ++counts[step_composition(Composition{2, 1}, DecrementRow::uniform(3), step_gen)];
    for (const Composition& c : enumerate_compositions(3)) {
        const auto it = expected.find(c);
        const Rational p = it == expected.end() ? Rational(0) : it->second;
        CHECK(within_three_sigma(counts[c], draws, p));
    }
}

TEST_CASE("product-form facts of the fragmented chain", "[chains]") {
    CHECK_NOTHROW(verify_l1(2, DecrementRow{2, {Rational(1, 2), Rational(1, 2)}}));
    const ProductFormReport report = verify_l1(3, DecrementRow::uniform(3));
    CHECK(report.state_count == 24);
    CHECK(report.permutation_probability == Rational(1, 6));

    const ProductFormReport half_half =
        verify_l1(4, two_param_decrement(Rational(1, 2), Rational(1, 2), 4));
    CHECK(half_half.state_count == 192); // 4! x 2^3
}

TEST_CASE("projections commute with the transition matrices", "[chains]") {
    CHECK_NOTHROW(pushforward_check(2, DecrementRow{2, {Rational(2, 3), Rational(1, 3)}}));
    CHECK_NOTHROW(pushforward_check(3, DecrementRow::uniform(3)));
    CHECK_NOTHROW(pushforward_check(4, two_param_decrement(Rational(1, 2), Rational(1, 2), 4)));
}

TEST_CASE("canonical states are reached in the expected number of steps", "[chains]") {
    // Full support: the single-box state is reachable in one step.
    {
        const ExactChain<FragmentedPermutation> chain = fragperm_chain(4, DecrementRow::uniform(4));
        std::vector<int> identity{1, 2, 3, 4};
        CHECK(reachable_from_everywhere(chain,
                                        FragmentedPermutation{identity, Composition{4}}, 1));
    }
    // Support {2} at n = 4: two boxes of two, two steps.
    {
        DecrementRow pairs{4, {Rational(0), Rational(1), Rational(0), Rational(0)}};
        const ExactChain<FragmentedPermutation> chain = fragperm_chain(4, pairs);
        std::vector<int> identity{1, 2, 3, 4};
        CHECK(reachable_from_everywhere(chain,
                                        FragmentedPermutation{identity, Composition{2, 2}}, 2));
    }
    // Support {2} at n = 3: boxes (2,1), two steps.
    {
        DecrementRow pairs{3, {Rational(0), Rational(1), Rational(0)}};
        const ExactChain<FragmentedPermutation> chain = fragperm_chain(3, pairs);
        std::vector<int> identity{1, 2, 3};
        CHECK(reachable_from_everywhere(chain,
                                        FragmentedPermutation{identity, Composition{2, 1}}, 2));
    }
}

TEST_CASE("simulated occupation frequencies track the stationary law", "[chains]") {
    const int n = 4;
    const DecrementRow row = DecrementRow::uniform(n);
    const ExactChain<Composition> chain = composition_chain(n, row);
    const std::map<Composition, Rational> pi = stationary(chain);

    RandomGenerator gen(20240817);
    Composition state{n};
    for (int i = 0; i < 1000; ++i) state = step_composition(state, row, gen);
    std::map<Composition, std::uint64_t> occupancy;
    const std::uint64_t steps = 100000;
    for (std::uint64_t i = 0; i < steps; ++i) {
        state = step_composition(state, row, gen);
        ++occupancy[state];
    }
    for (const auto& [c, p] : pi) CHECK(within_three_sigma(occupancy[c], steps, p));
}

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>
#include <vector>

#include "regen/partition.hpp"
#include "regen/random.hpp"
#include "regen/rational.hpp"

using namespace regen;

namespace {

// Independent partition counter (bounded-part recurrence), used as the
// oracle for enumeration sizes.
long long count_partitions_oracle(int n) {
    std::vector<std::vector<long long>> c(static_cast<std::size_t>(n) + 1,
                                          std::vector<long long>(static_cast<std::size_t>(n) + 1, 0));
    for (int k = 0; k <= n; ++k) c[0][static_cast<std::size_t>(k)] = 1;
    for (int m = 1; m <= n; ++m)
        for (int k = 1; k <= n; ++k) {
            c[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)] =
                c[static_cast<std::size_t>(m)][static_cast<std::size_t>(k) - 1];
            if (m >= k)
                c[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)] +=
                    c[static_cast<std::size_t>(m - k)][static_cast<std::size_t>(k)];
        }
    return c[static_cast<std::size_t>(n)][static_cast<std::size_t>(n)];
}

} // namespace

TEST_CASE("rational parsing and formatting", "[core]") {
    CHECK(parse_rational("1/2") == Rational(1, 2));
    CHECK(parse_rational("7/21") == Rational(1, 3));
    CHECK(parse_rational("-3/6") == Rational(-1, 2));
    CHECK(parse_rational("5") == Rational(5));
    CHECK(parse_rational("-5") == Rational(-5));
    CHECK(parse_rational("1/-2") == Rational(-1, 2));

    CHECK(to_string(Rational(1, 2)) == "1/2");
    CHECK(to_string(Rational(3)) == "3");
    CHECK(to_string(Rational(-1, 2)) == "-1/2");

    CHECK_THROWS_AS(parse_rational(""), validation_error);
    CHECK_THROWS_AS(parse_rational("1/0"), validation_error);
    CHECK_THROWS_AS(parse_rational("x"), validation_error);
    CHECK_THROWS_AS(parse_rational("1.5"), validation_error);
}

TEST_CASE("decimal rendering is display-only rounding of the exact value", "[core]") {
    CHECK(to_decimal_string(Rational(1, 3), 6) == "0.333333");
    CHECK(to_decimal_string(Rational(2, 3), 6) == "0.666667");
    CHECK(to_decimal_string(Rational(-1, 2), 4) == "-0.5000");
    CHECK(to_decimal_string(Rational(1), 3) == "1.000");
    CHECK(to_decimal_string(Rational(2, 3), 0) == "1");
    CHECK(to_decimal_string(Rational(0), 2) == "0.00");
}

TEST_CASE("rational arithmetic is exact under reordering", "[core]") {
    std::vector<Rational> terms;
    for (int k = 1; k <= 24; ++k) terms.emplace_back(1, k);
    Rational forward = 0;
    for (const Rational& t : terms) forward += t;
    Rational backward = 0;
    for (auto it = terms.rbegin(); it != terms.rend(); ++it) backward += *it;
    CHECK(forward == backward);
    CHECK(denominator(forward) > 0);
    CHECK(gcd(numerator(forward), Int(denominator(forward))) == 1);
}

TEST_CASE("combinatorial helpers", "[core]") {
    CHECK(factorial(0) == 1);
    CHECK(factorial(5) == 120);
    CHECK(binomial(5, 2) == 10);
    CHECK(binomial(5, 0) == 1);
    CHECK(binomial(4, 7) == 0);
    CHECK(pow_rational(Rational(2, 3), 3) == Rational(8, 27));
    CHECK(pow_rational(Rational(2, 3), 0) == 1);
    CHECK(pow_rational(Rational(2, 3), -2) == Rational(9, 4));
}

TEST_CASE("partition enumeration in reverse-lexicographic ranked order", "[core]") {
    CHECK(enumerate_partitions(1) == std::vector<Partition>{Partition{1}});
    CHECK(enumerate_partitions(3) ==
          std::vector<Partition>{Partition{3}, Partition{2, 1}, Partition{1, 1, 1}});
    CHECK(enumerate_partitions(5).size() == 7);

    for (int n = 1; n <= 10; ++n) {
        const auto all = enumerate_partitions(n);
        CHECK(static_cast<long long>(all.size()) == count_partitions_oracle(n));
        std::set<Partition> distinct(all.begin(), all.end());
        CHECK(distinct.size() == all.size());
        for (std::size_t i = 0; i + 1 < all.size(); ++i)
            CHECK(all[i].ranked() > all[i + 1].ranked());
        for (const Partition& lambda : all) {
            int weight = 0;
            for (const auto& [r, a] : lambda.multiplicities()) weight += r * a;
            CHECK(weight == n);
            CHECK(lambda.part_count() >= 1);
        }
    }
    CHECK_THROWS_AS(enumerate_partitions(31), limit_error);
    CHECK_THROWS_AS(enumerate_partitions(0), std::domain_error);
}

TEST_CASE("composition enumeration in lexicographic order", "[core]") {
    CHECK(enumerate_compositions(1) == std::vector<Composition>{Composition{1}});
    CHECK(enumerate_compositions(3) ==
          std::vector<Composition>{Composition{1, 1, 1}, Composition{1, 2}, Composition{2, 1},
                                   Composition{3}});
    CHECK(enumerate_compositions(10).size() == 512);

    for (int n = 1; n <= 10; ++n) {
        const auto all = enumerate_compositions(n);
        CHECK(all.size() == (std::size_t{1} << (n - 1)));
        for (std::size_t i = 0; i + 1 < all.size(); ++i) CHECK(all[i] < all[i + 1]);
        // Ranking and deduplicating recovers exactly the partitions of n.
        std::set<Partition> ranked_set;
        for (const Composition& c : all) ranked_set.insert(rank(c));
        const auto partitions = enumerate_partitions(n);
        CHECK(ranked_set == std::set<Partition>(partitions.begin(), partitions.end()));
    }
    CHECK_THROWS_AS(enumerate_compositions(17), limit_error);
    CHECK_THROWS_AS(enumerate_compositions(-1), std::domain_error);
}

TEST_CASE("rank of a composition", "[core]") {
    CHECK(rank(Composition{1, 2}) == Partition{2, 1});
    CHECK(rank(Composition{2, 1}) == Partition{2, 1});
    CHECK(rank(Composition{3, 1, 3}) == Partition{3, 3, 1});
    CHECK(rank(Composition{3, 1, 3}).ranked() == std::vector<int>{3, 3, 1});
    CHECK_THROWS_AS(rank(Composition()), std::domain_error);
}

TEST_CASE("part deletion and reinsertion", "[core]") {
    CHECK(Partition{2, 1}.without_part(2) == Partition{1});
    CHECK(Partition{2, 1}.without_part(1) == Partition{2});
    CHECK(Partition{3}.without_part(3).empty());
    CHECK_THROWS_AS((Partition{2, 1}.without_part(3)), std::domain_error);

    for (int n = 1; n <= 10; ++n)
        for (const Partition& lambda : enumerate_partitions(n))
            for (const auto& [x, a] : lambda.multiplicities())
                CHECK(lambda.without_part(x).with_part(x) == lambda);
}

TEST_CASE("hook detection", "[core]") {
    CHECK(Partition{5}.is_hook());
    CHECK(Partition{3, 1, 1}.is_hook());
    CHECK(Partition{1, 1, 1}.is_hook());
    CHECK_FALSE(Partition{2, 2}.is_hook());
    CHECK_FALSE(Partition{3, 2, 1}.is_hook());
}

TEST_CASE("seeded generator is reproducible", "[core]") {
    RandomGenerator a(42);
    RandomGenerator b(42);
    // mt19937_64 output is pinned by the standard.
    CHECK(a.next() == 13930160852258120406ULL);
    CHECK(a.next() == 11788048577503494824ULL);
    for (int i = 0; i < 100; ++i) b.next();
    RandomGenerator c(42);
    RandomGenerator d(42);
    for (int i = 0; i < 50; ++i) CHECK(c.next() == d.next());
}

TEST_CASE("bounded draws stay in range", "[core]") {
    RandomGenerator gen(7);
    for (int i = 0; i < 1000; ++i) CHECK(gen.below(6) < 6);
    const Int bound = pow(Int(10), 30);
    for (int i = 0; i < 50; ++i) {
        const Int v = gen.below_big(bound);
        CHECK(v >= 0);
        CHECK(v < bound);
    }
    const Rational u = gen.unit_rational();
    CHECK(u >= 0);
    CHECK(u < 1);
    CHECK_THROWS_AS(gen.below(0), std::domain_error);
}

TEST_CASE("categorical sampling follows exact rational weights", "[core]") {
    RandomGenerator gen(2024);
    const std::vector<Rational> weights{Rational(1, 2), Rational(1, 3), Rational(1, 6)};
    std::vector<std::uint64_t> counts(3, 0);
    const std::uint64_t draws = 60000;
    for (std::uint64_t i = 0; i < draws; ++i) ++counts[gen.categorical(weights)];
    for (std::size_t i = 0; i < weights.size(); ++i)
        CHECK(within_three_sigma(counts[i], draws, weights[i]));
    CHECK_THROWS_AS(gen.categorical(std::vector<Rational>{Rational(0), Rational(0)}),
                    validation_error);
    CHECK_THROWS_AS(gen.categorical(std::vector<Rational>{Rational(-1), Rational(2)}),
                    validation_error);
}

TEST_CASE("three-sigma helper edge cases", "[core]") {
    CHECK(within_three_sigma(0, 1000, Rational(0)));
    CHECK_FALSE(within_three_sigma(1, 1000, Rational(0)));
    CHECK(within_three_sigma(1000, 1000, Rational(1)));
    CHECK_FALSE(within_three_sigma(999, 1000, Rational(1)));
    CHECK(within_three_sigma(500, 1000, Rational(1, 2)));
    CHECK_FALSE(within_three_sigma(700, 1000, Rational(1, 2)));
}

/**
 * @file acceptance.cpp
 * @brief End-to-end identity suite. Each criterion prints one PASS/FAIL
 *        line; the process exits nonzero if any criterion fails.
 *
 * Every check below is an exact identity over rationals unless the line
 * says otherwise (the Monte Carlo criterion uses exact three-sigma binomial
 * bounds at a fixed seed).
 */

#include <chrono>
#include <cstdint>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "regen/regen.hpp"

using namespace regen;

namespace {

int failures = 0;

void criterion(int number, const std::string& title, const std::function<bool()>& body,
               long target_seconds = 0) {
    const auto start = std::chrono::steady_clock::now();
    bool ok = false;
    std::string note;
    try {
        ok = body();
    } catch (const std::exception& e) {
        note = std::string(" (") + e.what() + ")";
    }
    const auto elapsed =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
    if (target_seconds > 0) {
        note += " [target < " + std::to_string(target_seconds) + " s]";
        if (elapsed.count() > target_seconds * 1000) {
#ifdef NDEBUG
            // The runtime targets bind the optimized artifact; instrumented
            // builds report but do not fail on time.
            ok = false;
#endif
            note += " exceeded";
        }
    }
    if (!ok) ++failures;
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << "criterion " << number << ": " << title << " ("
              << elapsed.count() / 1000.0 << " s)" << note << "\n";
}

DecrementRow random_row(int n, RandomGenerator& gen) {
    std::vector<Rational> weights;
    Rational total = 0;
    for (int i = 0; i < n; ++i) {
        const Rational w(1 + gen.below(30), 1 + gen.below(30));
        weights.push_back(w);
        total += w;
    }
    DecrementRow row;
    row.n = n;
    for (Rational& w : weights) row.q.push_back(w / total);
    return row;
}

std::vector<TwoParamModel> parameter_grid() {
    std::vector<TwoParamModel> grid;
    for (const Rational& alpha :
         {Rational(0), Rational(1, 4), Rational(1, 2), Rational(3, 4), Rational(1)})
        for (const Rational& theta : {Rational(0), Rational(1, 2), Rational(1), Rational(2)})
            grid.emplace_back(alpha, theta);
    return grid;
}

bool criterion_two_param_regeneration() {
    for (const TwoParamModel& model : parameter_grid()) {
        const PartitionLevels levels = partition_levels(model, 7);
        const DeletionKernel kernel = DeletionKernel::tau(model.deletion_tau());
        const RegenResidual residual = regen_residual(levels, kernel);
        if (residual.value != 0) {
            std::cerr << "  residual " << to_string(residual.value) << " at alpha="
                      << to_string(model.alpha()) << " theta=" << to_string(model.theta())
                      << " level " << residual.level << " " << residual.lambda.to_string() << "\n";
            return false;
        }
    }
    return true;
}

bool criterion_size_biased_uniform() {
    for (int n = 1; n <= 10; ++n) {
        const DecrementRow row = deleted_part_distribution(
            partition_distribution(TwoParamModel(0, 1), n), DeletionKernel::size_biased());
        for (int x = 1; x <= n; ++x)
            if (row.at(x) != Rational(1, n)) return false;
    }
    return true;
}

bool criterion_bijection_roundtrip() {
    RandomGenerator gen(20250801);
    for (int trial = 0; trial < 100; ++trial) {
        const DecrementRow row = random_row(6, gen);
        const PartitionLevels levels = levels_from_matrix(full_matrix(row));
        const InversionOutcome outcome = invert_p_to_q(levels);
        if (!outcome.ok() || outcome.row->q != row.q) {
            std::cerr << "  trial " << trial << " failed\n";
            return false;
        }
    }
    return true;
}

bool criterion_projection_coherence() {
    const LevyMeasureSpec specs[] = {
        LevyMeasureSpec::dirac(1, 1, 1),
        LevyMeasureSpec::dirac(Rational(1, 2)),
        LevyMeasureSpec({}, BetaComponent{Rational(1, 2), 1, 1}, 0),
        LevyMeasureSpec({}, BetaComponent{1, Rational(-1, 2), Rational(1, 2)}, 0)};
    for (const LevyMeasureSpec& spec : specs)
        for (int n = 1; n <= 8; ++n) {
            const DecrementRow top = decrement_from_paintbox(spec, n);
            for (int m = 1; m <= n; ++m)
                if (hypgeom_project(top, m).q != decrement_from_paintbox(spec, m).q) return false;
        }
    return true;
}

bool criterion_hook_rows() {
    for (const Rational& drift : {Rational(1, 2), Rational(1), Rational(2)}) {
        const LevyMeasureSpec spec = LevyMeasureSpec::dirac(1, 1, drift);
        for (int n = 2; n <= 10; ++n) {
            const DecrementRow row = decrement_from_paintbox(spec, n);
            if (row.at(n) != 1 / (1 + n * drift)) return false;
            if (row.at(1) != n * drift / (1 + n * drift)) return false;
        }
    }
    return true;
}

bool criterion_chain_stationarity() {
    for (int n = 1; n <= 8; ++n) {
        for (const DecrementRow& row :
             {DecrementRow::uniform(n), two_param_decrement(Rational(1, 2), Rational(1, 2), n)}) {
            const ExactChain<Composition> chain = composition_chain(n, row);
            const std::map<Composition, Rational> pi = stationary(chain);
            const CompositionDistribution law = composition_distribution(full_matrix(row), n);
            for (const Composition& c : chain.states)
                if (pi.at(c) != law.at(c)) return false;
        }
    }
    for (int n = 1; n <= 4; ++n) {
        verify_l1(n, DecrementRow::uniform(n));
        verify_l1(n, two_param_decrement(Rational(1, 2), Rational(1, 2), n));
    }
    return true;
}

bool criterion_negative_detection() {
    const PartitionLevels levels =
        partition_levels(TwoParamModel(Rational(3, 4), Rational(-1, 4), true), 6);
    const RegenerativityVerdict verdict = regenerativity_check(levels);
    if (verdict.regenerative()) return false;
    if (verdict.witness->reason != "negative decrement entry") return false;
    if (!(verdict.witness->value < 0)) return false;
    if (verdict.witness->level > 6) return false;
    std::cout << "  criterion 7 witness: " << verdict.witness->describe() << "\n";
    return true;
}

bool criterion_monte_carlo() {
    const int n = 5;
    const std::uint64_t draws = 100000;

    // Residual allocation draws from the theta = 1 Ewens triangle.
    const DecrementMatrix ewens = full_matrix(two_param_decrement(Rational(0), Rational(1), n));
    RandomGenerator gen_residual(99001);
    std::map<Composition, std::uint64_t> counts;
    for (std::uint64_t i = 0; i < draws; ++i) ++counts[sample_composition(ewens, n, gen_residual)];
    const CompositionDistribution ewens_law = composition_distribution(ewens, n);
    for (const Composition& c : enumerate_compositions(n))
        if (!within_three_sigma(counts[c], draws, ewens_law.at(c))) {
            std::cerr << "  residual-allocation frequency off at " << c.to_string() << "\n";
            return false;
        }

    // Stick-breaking paintbox draws from the half-atom spec.
    const LevyMeasureSpec spec = LevyMeasureSpec::dirac(Rational(1, 2));
    const PaintboxSampleReport report = run_paintbox_sample(spec, n, draws, 99002);
    for (const Composition& c : enumerate_compositions(n)) {
        const auto it = report.empirical.find(c);
        const std::uint64_t count = it == report.empirical.end() ? 0 : it->second;
        if (!within_three_sigma(count, draws, report.exact.at(c))) {
            std::cerr << "  paintbox frequency off at " << c.to_string() << "\n";
            return false;
        }
    }
    return true;
}

bool criterion_consistency_suite() {
    for (const TwoParamModel& model : parameter_grid())
        if (find_consistency_failure(partition_levels(model, 7))) return false;

    const LevyMeasureSpec specs[] = {
        LevyMeasureSpec::dirac(1, 1, 1),
        LevyMeasureSpec::dirac(Rational(1, 2)),
        LevyMeasureSpec({}, BetaComponent{Rational(1, 2), 1, 1}, 0),
        LevyMeasureSpec({}, BetaComponent{1, Rational(-1, 2), Rational(1, 2)}, 0)};
    for (const LevyMeasureSpec& spec : specs)
        if (find_consistency_failure(
                levels_from_matrix(full_matrix(decrement_from_paintbox(spec, 7)))))
            return false;

    // Structures regenerated from inverted rows, including random ones.
    RandomGenerator gen(4242);
    for (int trial = 0; trial < 2; ++trial) {
        const PartitionLevels regenerated = levels_from_matrix(full_matrix(random_row(7, gen)));
        if (find_consistency_failure(regenerated)) return false;
    }
    for (const Rational& alpha : {Rational(0), Rational(1, 2)}) {
        const RegenerativityVerdict verdict =
            regenerativity_check(partition_levels(TwoParamModel(alpha, 1), 7));
        if (!verdict.regenerative()) return false;
        if (find_consistency_failure(levels_from_matrix(*verdict.matrix))) return false;
    }
    return true;
}

} // namespace

int main() {
    std::cout << "acceptance suite: exact identities of the regenerative-structure toolkit\n";

    criterion(1, "two-parameter structures regenerate under their tau kernel (grid, n <= 7)",
              criterion_two_param_regeneration, 60);
    criterion(2, "size-biased deletion from the theta=1 Ewens family is uniform (n <= 10)",
              criterion_size_biased_uniform);
    criterion(3, "100 random decrement rows at n=6 round-trip through the partition law",
              criterion_bijection_roundtrip);
    criterion(4, "hypergeometric projection matches direct paintbox rows (4 specs, n <= 8)",
              criterion_projection_coherence);
    criterion(5, "hook rows q(n,n)=1/(1+n d), q(n,1)=n d/(1+n d) for d in {1/2,1,2}, n <= 10",
              criterion_hook_rows);
    criterion(6, "composition-chain stationarity (n <= 8) and fragmented product form (n <= 4)",
              criterion_chain_stationarity, 120);
    criterion(7, "extended-range (3/4,-1/4) yields a negative entry and verdict No",
              criterion_negative_detection);
    criterion(8, "two seeded samplers stay within three-sigma of their exact laws (1e5 draws)",
              criterion_monte_carlo, 30);
    criterion(9, "every producible structure is sampling-consistent across levels <= 7",
              criterion_consistency_suite);

    if (failures == 0) {
        std::cout << "all criteria passed\n";
        return 0;
    }
    std::cout << failures << " criteria failed\n";
    return 1;
}

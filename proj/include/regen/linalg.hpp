#pragma once

/**
 * @file linalg.hpp
 * @brief Exact rational Gaussian elimination for stationary distributions.
 *
 * The stationary vector of a row-stochastic matrix P solves pi (P - I) = 0
 * with sum(pi) = 1. The system is solved exactly over the rationals, so no
 * tolerance enters; a solution space of dimension other than one raises an
 * invariant violation, since every chain built by this library is known to
 * have a unique stationary law.
 */

#include <cstddef>
#include <utility>
#include <vector>

#include "regen/errors.hpp"
#include "regen/rational.hpp"

namespace regen {

using SparseRow = std::vector<std::pair<int, Rational>>; // (column, value), sorted

/// Unique probability vector pi with pi P = pi. Rows of P are sparse;
/// states without entries are absorbing only if explicitly encoded.
inline std::vector<Rational> stationary_vector(const std::vector<SparseRow>& transition_rows) {
    const std::size_t n = transition_rows.size();
    if (n == 0) throw validation_error("stationary_vector: empty chain");

    // Equations: columns of (P^T - I) give n balance equations, plus the
    // normalization row. Unknowns: pi_0 .. pi_{n-1}; last column is the rhs.
    std::vector<std::vector<Rational>> m(n + 1, std::vector<Rational>(n + 1, Rational(0)));
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& [j, p] : transition_rows[i]) m[static_cast<std::size_t>(j)][i] += p;
        m[i][i] -= 1;
    }
    for (std::size_t i = 0; i < n; ++i) m[n][i] = 1;
    m[n][n] = 1;

    // Elimination with smallest-operand pivoting to limit coefficient growth.
    std::vector<std::size_t> pivot_row_of_col(n);
    std::vector<bool> used(n + 1, false);
    auto size_of = [](const Rational& r) {
        const Int& num = numerator(r);
        const Int& den = denominator(r);
        return (num == 0 ? 0 : msb(abs(num))) + msb(den);
    };
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t best = n + 1;
        std::size_t best_size = 0;
        for (std::size_t row = 0; row <= n; ++row) {
            if (used[row] || m[row][col] == 0) continue;
            const std::size_t s = size_of(m[row][col]);
            if (best == n + 1 || s < best_size) {
                best = row;
                best_size = s;
            }
        }
        if (best == n + 1)
            throw invariant_violation(
                "stationary_vector: stationary solution space has dimension != 1");
        used[best] = true;
        pivot_row_of_col[col] = best;
        const Rational inv = m[best][col];
        for (std::size_t c = col; c <= n; ++c) m[best][c] /= inv;
        for (std::size_t row = 0; row <= n; ++row) {
            if (row == best || m[row][col] == 0) continue;
            const Rational factor = m[row][col];
            for (std::size_t c = col; c <= n; ++c) m[row][c] -= factor * m[best][c];
        }
    }
    for (std::size_t row = 0; row <= n; ++row)
        if (!used[row] && m[row][n] != 0)
            throw invariant_violation("stationary_vector: inconsistent stationary system");

    std::vector<Rational> pi(n);
    for (std::size_t col = 0; col < n; ++col) pi[col] = m[pivot_row_of_col[col]][n];
    return pi;
}

} // namespace regen

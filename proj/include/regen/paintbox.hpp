#pragma once

/**
 * @file paintbox.hpp
 * @brief Subordinator paintbox: moment sums of a measure on ]0,1] plus
 *        drift, the decrement rows they induce, and a stick-breaking Monte
 *        Carlo sampler for finite-mass specs.
 *
 * A spec (atoms, optional beta-density component, drift) carries a measure
 * nu on ]0,1] with finite first moment and a drift d >= 0. The moment sums
 *   Phi(n, r) = n d 1(r=1) + C(n,r) Integral x^r (1-x)^(n-r) nu(dx),
 *   Phi(n)    = sum_r Phi(n, r) = n d + Integral (1 - (1-x)^n) nu(dx)
 * define the decrement rows q(n, r) = Phi(n, r) / Phi(n) of a regenerative
 * composition structure. The beta component is normalized so every Phi is a
 * rational function of the spec parameters, keeping the whole pipeline
 * exact; scaling all weights and the drift by a common factor leaves the
 * rows unchanged, so no normalization of the spec itself is required.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "regen/decrement.hpp"
#include "regen/partition.hpp"
#include "regen/random.hpp"
#include "regen/rational.hpp"

namespace regen {

struct LevyAtom {
    Rational location; // in ]0, 1]
    Rational weight;   // > 0
};

/// Density component c x^(sigma-1) (1-x)^(theta-1) / B(1+sigma, theta) dx,
/// scaled so that its first moment is exactly c.
struct BetaComponent {
    Rational moment_mass; // c > 0
    Rational sigma;       // > -1
    Rational theta;       // > 0
};

class LevyMeasureSpec {
public:
    LevyMeasureSpec(std::vector<LevyAtom> atoms, std::optional<BetaComponent> beta, Rational drift)
        : atoms_(std::move(atoms)), beta_(std::move(beta)), drift_(std::move(drift)) {
        for (const LevyAtom& a : atoms_) {
            if (a.location <= 0 || a.location > 1)
                throw std::domain_error("LevyMeasureSpec: atom location outside ]0,1]");
            if (a.weight <= 0) throw std::domain_error("LevyMeasureSpec: atom weight must be positive");
        }
        if (beta_) {
            if (beta_->moment_mass <= 0)
                throw std::domain_error("LevyMeasureSpec: beta moment mass must be positive");
            if (beta_->sigma <= -1) throw std::domain_error("LevyMeasureSpec: beta sigma must exceed -1");
            if (beta_->theta <= 0) throw std::domain_error("LevyMeasureSpec: beta theta must be positive");
        }
        if (drift_ < 0) throw std::domain_error("LevyMeasureSpec: drift must be nonnegative");
        if (atoms_.empty() && !beta_ && drift_ == 0)
            throw std::domain_error("LevyMeasureSpec: empty spec");
    }

    static LevyMeasureSpec dirac(Rational location, Rational weight = 1, Rational drift = 0) {
        return LevyMeasureSpec({LevyAtom{std::move(location), std::move(weight)}}, std::nullopt,
                               std::move(drift));
    }

    const std::vector<LevyAtom>& atoms() const { return atoms_; }
    const std::optional<BetaComponent>& beta() const { return beta_; }
    const Rational& drift() const { return drift_; }

    /// Total mass of the measure when finite: sum of atom weights plus
    /// c (sigma + theta) / sigma for the beta part (finite iff sigma > 0).
    std::optional<Rational> total_mass() const {
        Rational mass = 0;
        for (const LevyAtom& a : atoms_) mass += a.weight;
        if (beta_) {
            if (beta_->sigma <= 0) return std::nullopt;
            mass += beta_->moment_mass * (beta_->sigma + beta_->theta) / beta_->sigma;
        }
        return mass;
    }

private:
    std::vector<LevyAtom> atoms_;
    std::optional<BetaComponent> beta_;
    Rational drift_;
};

/// Beta-moment ratio B(r+sigma, n-r+theta) / B(1+sigma, theta) as a product
/// of rational factors.
inline Rational beta_moment_ratio(int n, int r, const Rational& sigma, const Rational& theta) {
    Rational value = 1;
    for (int i = 1; i <= r - 1; ++i) value *= sigma + i;
    for (int j = 0; j <= n - r - 1; ++j) value *= theta + j;
    for (int k = 1; k <= n - 1; ++k) value /= sigma + theta + k;
    return value;
}

/// Phi(n, r): drift contributes n d to r = 1 only; each atom contributes
/// w u^r (1-u)^(n-r) and the beta component its exact moment, both times
/// C(n, r).
inline Rational phi_nr(const LevyMeasureSpec& spec, int n, int r) {
    if (r < 1 || r > n) throw std::domain_error("phi_nr: r outside 1..n");
    Rational integral = 0;
    for (const LevyAtom& a : spec.atoms())
        integral += a.weight * pow_rational(a.location, r) * pow_rational(1 - a.location, n - r);
    if (spec.beta())
        integral += spec.beta()->moment_mass *
                    beta_moment_ratio(n, r, spec.beta()->sigma, spec.beta()->theta);
    Rational value = Rational(binomial(n, r)) * integral;
    if (r == 1) value += n * spec.drift();
    return value;
}

/// Phi(n) = sum_r Phi(n, r); equals n d + Integral (1-(1-x)^n) nu(dx) by the
/// binomial identity, which tests cross-check against direct atom sums.
inline Rational laplace_exponent(const LevyMeasureSpec& spec, int n) {
    if (n < 1) throw std::domain_error("laplace_exponent: n must be positive");
    Rational total = 0;
    for (int r = 1; r <= n; ++r) total += phi_nr(spec, n, r);
    return total;
}

/// Decrement row q(n, r) = Phi(n, r) / Phi(n).
inline DecrementRow decrement_from_paintbox(const LevyMeasureSpec& spec, int n) {
    const Rational phi = laplace_exponent(spec, n);
    DecrementRow row;
    row.n = n;
    row.q.reserve(static_cast<std::size_t>(n));
    for (int r = 1; r <= n; ++r) row.q.push_back(phi_nr(spec, n, r) / phi);
    return row;
}

namespace detail {

/// Beta(a, b) variate via Johnk's method: accept (U^(1/a), V^(1/b)) when the
/// pair sums to at most 1. Adequate at the small shape parameters used for
/// desk-scale specs.
inline double beta_variate(double a, double b, RandomGenerator& gen) {
    for (;;) {
        const double x = std::pow(gen.unit_double(), 1.0 / a);
        const double y = std::pow(gen.unit_double(), 1.0 / b);
        const double s = x + y;
        if (s > 0.0 && s <= 1.0) return x / s;
    }
}

inline constexpr int kMaxStickSegments = 1 << 20;

} // namespace detail

/**
 * Stick-breaking sampler for the composition of n induced by the paintbox
 * of a finite-mass, driftless spec: normalized jumps W_j are drawn i.i.d.
 * from nu / |nu|, the points R_j = 1 - prod_{i<=j} (1 - W_i) cut [0,1] into
 * gaps, n uniform points fall on [0,1], and the composition lists the gap
 * occupancy counts left to right, with points hitting a cut point counted
 * as singletons.
 *
 * Atom-only specs run fully in exact arithmetic (uniforms are 128-bit
 * dyadic rationals). Specs with a beta component (requires sigma > 0 for
 * finite mass) run in double precision. Drifted or infinite-mass specs are
 * refused; their composition law is available exactly through
 * decrement_from_paintbox.
 */
inline Composition sample_composition_via_paintbox(const LevyMeasureSpec& spec, int n,
                                                   RandomGenerator& gen) {
    if (n < 1) throw std::domain_error("sample_composition_via_paintbox: n must be positive");
    if (spec.drift() != 0)
        throw unsupported_spec_error(
            "sample_composition_via_paintbox: drifted specs are not simulated; use the decrement row");
    const std::optional<Rational> mass = spec.total_mass();
    if (!mass)
        throw unsupported_spec_error(
            "sample_composition_via_paintbox: infinite-mass spec (beta sigma <= 0); use the decrement row");

    std::vector<int> parts;
    if (!spec.beta()) {
        // Exact path.
        std::vector<Rational> weights;
        weights.reserve(spec.atoms().size());
        for (const LevyAtom& a : spec.atoms()) weights.push_back(a.weight);
        std::vector<Rational> points(static_cast<std::size_t>(n));
        for (Rational& u : points) u = gen.unit_rational(128);
        std::sort(points.begin(), points.end());

        std::size_t next = 0;
        // A zero coordinate sits on the cut point at the origin.
        while (next < points.size() && points[next] == 0) {
            parts.push_back(1);
            ++next;
        }
        Rational reached = 0;
        int segments = 0;
        while (next < points.size()) {
            if (++segments > detail::kMaxStickSegments)
                throw std::runtime_error("sample_composition_via_paintbox: stick generation stalled");
            const Rational& jump = spec.atoms()[gen.categorical(weights)].location;
            const Rational cut = reached + (1 - reached) * jump;
            int inside = 0;
            while (next < points.size() && points[next] < cut) {
                ++inside;
                ++next;
            }
            if (inside > 0) parts.push_back(inside);
            while (next < points.size() && points[next] == cut) {
                parts.push_back(1);
                ++next;
            }
            reached = cut;
        }
    } else {
        // Double-precision path for specs with a beta component.
        const double sigma = static_cast<double>(spec.beta()->sigma);
        const double theta = static_cast<double>(spec.beta()->theta);
        std::vector<Rational> weights;
        weights.reserve(spec.atoms().size() + 1);
        for (const LevyAtom& a : spec.atoms()) weights.push_back(a.weight);
        weights.push_back(spec.beta()->moment_mass * (spec.beta()->sigma + spec.beta()->theta) /
                          spec.beta()->sigma);

        std::vector<double> points(static_cast<std::size_t>(n));
        for (double& u : points) u = gen.unit_double();
        std::sort(points.begin(), points.end());

        std::size_t next = 0;
        while (next < points.size() && points[next] == 0.0) {
            parts.push_back(1);
            ++next;
        }
        double reached = 0.0;
        int segments = 0;
        while (next < points.size()) {
            if (++segments > detail::kMaxStickSegments)
                throw std::runtime_error("sample_composition_via_paintbox: stick generation stalled");
            const std::size_t which = gen.categorical(weights);
            const double jump = which < spec.atoms().size()
                                    ? static_cast<double>(spec.atoms()[which].location)
                                    : detail::beta_variate(sigma, theta, gen);
            const double cut = reached + (1.0 - reached) * jump;
            int inside = 0;
            while (next < points.size() && points[next] < cut) {
                ++inside;
                ++next;
            }
            if (inside > 0) parts.push_back(inside);
            while (next < points.size() && points[next] == cut) {
                parts.push_back(1);
                ++next;
            }
            reached = cut;
        }
    }
    return Composition(parts);
}

/// Seeded Monte Carlo run of the paintbox sampler against the exact
/// composition law of the same spec.
struct PaintboxSampleReport {
    int n = 0;
    std::uint64_t sample_count = 0;
    std::uint64_t seed = 0;
    std::map<Composition, std::uint64_t> empirical;
    std::map<Composition, Rational> exact;
    Rational max_abs_deviation; // max over compositions of |freq - p|
};

inline PaintboxSampleReport run_paintbox_sample(const LevyMeasureSpec& spec, int n,
                                                std::uint64_t sample_count, std::uint64_t seed,
                                                int limit = kDefaultCompositionLimit) {
    PaintboxSampleReport report;
    report.n = n;
    report.sample_count = sample_count;
    report.seed = seed;
    RandomGenerator gen(seed);
    for (std::uint64_t i = 0; i < sample_count; ++i)
        ++report.empirical[sample_composition_via_paintbox(spec, n, gen)];
    const DecrementMatrix matrix = full_matrix(decrement_from_paintbox(spec, n));
    report.exact = composition_distribution(matrix, n, limit).probs;
    report.max_abs_deviation = 0;
    for (const Composition& c : enumerate_compositions(n, limit)) {
        const auto it = report.empirical.find(c);
        const std::uint64_t count = it == report.empirical.end() ? 0 : it->second;
        const auto ex = report.exact.find(c);
        const Rational p = ex == report.exact.end() ? Rational(0) : ex->second;
        Rational dev = Rational(count, sample_count) - p;
        if (dev < 0) dev = -dev;
        if (dev > report.max_abs_deviation) report.max_abs_deviation = dev;
    }
    return report;
}

} // namespace regen

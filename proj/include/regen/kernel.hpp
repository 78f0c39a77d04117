#pragma once

/**
 * @file kernel.hpp
 * @brief Deletion kernels and the regeneration identity.
 *
 * A deletion kernel d(lambda, x) is the conditional law of the size of the
 * part removed from a partition lambda; it is supported on the part sizes of
 * lambda and each row sums to 1. A structure is regenerative under d when
 *     p(lambda) d(lambda, x) = q(n, x) p(lambda - {x})
 * holds for every lambda and every part x, with q(n, .) the unconditional
 * law of the deleted size. The one-parameter family
 *     d(lambda, r) = (a_r / n) ((n-r) tau + r (1 - tau)) / (1 - tau + (l-1) tau)
 * interpolates size-biased (tau=0), uniform (tau=1/2) and cosize-biased
 * (tau=1) deletion.
 */

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "regen/eppf.hpp"
#include "regen/partition.hpp"
#include "regen/rational.hpp"

namespace regen {

class DeletionKernel {
public:
    enum class Kind { SizeBiased, Uniform, Cosize, Tau, Table };

    using Table = std::map<std::pair<Partition, int>, Rational>;

    static DeletionKernel size_biased() { return DeletionKernel(Kind::SizeBiased, 0); }
    static DeletionKernel uniform() { return DeletionKernel(Kind::Uniform, Rational(1, 2)); }
    static DeletionKernel cosize() { return DeletionKernel(Kind::Cosize, 1); }

    static DeletionKernel tau(Rational t) {
        if (t < 0 || t > 1) throw std::domain_error("DeletionKernel: tau outside [0,1]");
        return DeletionKernel(Kind::Tau, std::move(t));
    }

    /// Explicit table, keyed by (partition, part size). Every partition that
    /// appears must carry a full row: entries nonnegative, supported on its
    /// parts, summing to exactly 1.
    static DeletionKernel table(Table entries) {
        std::map<Partition, Rational> row_sums;
        for (const auto& [key, value] : entries) {
            const auto& [lambda, x] = key;
            if (!lambda.has_part(x))
                throw validation_error("DeletionKernel table: " + std::to_string(x) +
                                       " is not a part of " + lambda.to_string());
            if (value < 0)
                throw validation_error("DeletionKernel table: negative entry at " + lambda.to_string());
            row_sums[lambda] += value;
        }
        for (const auto& [lambda, sum] : row_sums)
            if (sum != 1)
                throw validation_error("DeletionKernel table: row for " + lambda.to_string() +
                                       " sums to " + to_string(sum) + ", not 1");
        DeletionKernel k(Kind::Table, 0);
        k.table_ = std::move(entries);
        return k;
    }

    Kind kind() const { return kind_; }

    const Rational& tau_value() const {
        if (kind_ == Kind::Table) throw std::domain_error("tau_value: table kernel");
        return tau_;
    }

    /// d(lambda, x). A single-part partition always deletes its part.
    Rational value(const Partition& lambda, int x) const {
        if (!lambda.has_part(x))
            throw std::domain_error("DeletionKernel: " + std::to_string(x) + " is not a part of " +
                                    lambda.to_string());
        if (kind_ == Kind::Table) {
            auto it = table_.find({lambda, x});
            if (it == table_.end())
                throw std::domain_error("DeletionKernel table: no row for " + lambda.to_string());
            return it->second;
        }
        const int n = lambda.weight();
        const int ell = lambda.part_count();
        if (ell == 1) return 1;
        const Rational a(lambda.multiplicity(x));
        return a / n * ((n - x) * tau_ + x * (1 - tau_)) / (1 - tau_ + (ell - 1) * tau_);
    }

    std::string describe() const {
        switch (kind_) {
            case Kind::SizeBiased: return "size-biased";
            case Kind::Uniform: return "uniform";
            case Kind::Cosize: return "cosize";
            case Kind::Tau: return "tau=" + to_string(tau_);
            case Kind::Table: return "table";
        }
        return "?";
    }

private:
    DeletionKernel(Kind kind, Rational tau) : kind_(kind), tau_(std::move(tau)) {}

    Kind kind_;
    Rational tau_;
    Table table_;
};

} // namespace regen

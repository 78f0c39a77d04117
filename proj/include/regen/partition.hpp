#pragma once

/**
 * @file partition.hpp
 * @brief Integer partitions and compositions: the combinatorial universe the
 *        probability layers enumerate over.
 *
 * A Partition is a multiset of positive parts stored as multiplicities
 * (part size -> count); a Composition is an ordered sequence of positive
 * parts. Both are immutable after construction. The weight-0 objects are
 * distinguished values: the empty partition carries probability mass 1 at
 * level 0 of every structure.
 */

#include <algorithm>
#include <compare>
#include <initializer_list>
#include <map>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

#include "regen/errors.hpp"

namespace regen {

inline constexpr int kDefaultPartitionLimit = 30;
inline constexpr int kDefaultCompositionLimit = 16;

class Partition {
public:
    /// The empty partition of 0.
    Partition() = default;

    Partition(std::initializer_list<int> parts) : Partition(std::vector<int>(parts)) {}

    explicit Partition(const std::vector<int>& parts) {
        for (int p : parts) {
            if (p < 1) throw std::domain_error("Partition: parts must be positive");
            ++mult_[p];
            weight_ += p;
        }
    }

    /// The one-part partition (n).
    static Partition single(int n) { return Partition({n}); }

    int weight() const { return weight_; }

    /// Number of parts.
    int part_count() const {
        int l = 0;
        for (const auto& [r, a] : mult_) l += a;
        return l;
    }

    bool empty() const { return weight_ == 0; }

    int multiplicity(int r) const {
        auto it = mult_.find(r);
        return it == mult_.end() ? 0 : it->second;
    }

    bool has_part(int r) const { return multiplicity(r) > 0; }

    const std::map<int, int>& multiplicities() const { return mult_; }

    /// Part sizes in non-increasing order.
    std::vector<int> ranked() const {
        std::vector<int> out;
        for (auto it = mult_.rbegin(); it != mult_.rend(); ++it)
            out.insert(out.end(), static_cast<std::size_t>(it->second), it->first);
        return out;
    }

    /// At most one part larger than 1.
    bool is_hook() const {
        int big = 0;
        for (const auto& [r, a] : mult_)
            if (r > 1) big += a;
        return big <= 1;
    }

    /// Removes one part of size x. Deleting the only part yields the empty
    /// partition.
    Partition without_part(int x) const {
        if (!has_part(x)) throw std::domain_error("without_part: " + std::to_string(x) + " is not a part");
        Partition out = *this;
        if (--out.mult_[x] == 0) out.mult_.erase(x);
        out.weight_ -= x;
        return out;
    }

    Partition with_part(int x) const {
        if (x < 1) throw std::domain_error("with_part: part must be positive");
        Partition out = *this;
        ++out.mult_[x];
        out.weight_ += x;
        return out;
    }

    bool operator==(const Partition&) const = default;
    auto operator<=>(const Partition&) const = default;

    std::string to_string() const {
        if (empty()) return "()";
        std::string s = "(";
        bool first = true;
        for (int p : ranked()) {
            if (!first) s += ',';
            s += std::to_string(p);
            first = false;
        }
        return s + ")";
    }

private:
    int weight_ = 0;
    std::map<int, int> mult_;
};

class Composition {
public:
    /// The empty composition of 0.
    Composition() = default;

    Composition(std::initializer_list<int> parts) : Composition(std::vector<int>(parts)) {}

    explicit Composition(std::vector<int> parts) : parts_(std::move(parts)) {
        for (int p : parts_) {
            if (p < 1) throw std::domain_error("Composition: parts must be positive");
            weight_ += p;
        }
    }

    int weight() const { return weight_; }
    std::size_t size() const { return parts_.size(); }
    bool empty() const { return parts_.empty(); }
    int operator[](std::size_t i) const { return parts_[i]; }
    const std::vector<int>& parts() const { return parts_; }

    bool operator==(const Composition&) const = default;
    auto operator<=>(const Composition& rhs) const = default;

    std::string to_string() const {
        std::string s = "(";
        for (std::size_t i = 0; i < parts_.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(parts_[i]);
        }
        return s + ")";
    }

private:
    std::vector<int> parts_;
    int weight_ = 0;
};

inline std::ostream& operator<<(std::ostream& os, const Partition& lambda) {
    return os << lambda.to_string();
}

inline std::ostream& operator<<(std::ostream& os, const Composition& c) {
    return os << c.to_string();
}

/// Multiset of parts of a composition.
inline Partition rank(const Composition& c) {
    if (c.empty()) throw std::domain_error("rank: empty composition");
    return Partition(c.parts());
}

/// All partitions of n exactly once, in reverse-lexicographic ranked order:
/// (n) first, (1^n) last.
inline std::vector<Partition> enumerate_partitions(int n, int limit = kDefaultPartitionLimit) {
    if (n < 1) throw std::domain_error("enumerate_partitions: n must be positive");
    if (n > limit)
        throw limit_error("enumerate_partitions: n=" + std::to_string(n) + " exceeds limit " +
                          std::to_string(limit));
    std::vector<Partition> out;
    std::vector<int> current;
    auto rec = [&](auto&& self, int remaining, int max_part) -> void {
        if (remaining == 0) {
            out.emplace_back(current);
            return;
        }
        for (int p = std::min(remaining, max_part); p >= 1; --p) {
            current.push_back(p);
            self(self, remaining - p, p);
            current.pop_back();
        }
    };
    rec(rec, n, n);
    return out;
}

/// All 2^(n-1) compositions of n exactly once, in lexicographic order:
/// (1,1,...,1) first, (n) last.
inline std::vector<Composition> enumerate_compositions(int n, int limit = kDefaultCompositionLimit) {
    if (n < 1) throw std::domain_error("enumerate_compositions: n must be positive");
    if (n > limit)
        throw limit_error("enumerate_compositions: n=" + std::to_string(n) + " exceeds limit " +
                          std::to_string(limit));
    std::vector<Composition> out;
    out.reserve(std::size_t{1} << (n - 1));
    std::vector<int> current;
    auto rec = [&](auto&& self, int remaining) -> void {
        if (remaining == 0) {
            out.emplace_back(current);
            return;
        }
        for (int p = 1; p <= remaining; ++p) {
            current.push_back(p);
            self(self, remaining - p);
            current.pop_back();
        }
    };
    rec(rec, n);
    return out;
}

} // namespace regen

#pragma once

/**
 * @file json_io.hpp
 * @brief JSON (de)serialization of the document formats: model specs,
 *        kernel specs, decrement matrices, level files, and measure specs.
 *
 * Conventions: rationals are strings in canonical "num/den" (or integer)
 * form, partitions are non-increasing integer arrays, compositions are
 * ordered integer arrays. Decimal fields are renderings and never parsed
 * back.
 */

#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "regen/decrement.hpp"
#include "regen/eppf.hpp"
#include "regen/kernel.hpp"
#include "regen/paintbox.hpp"
#include "regen/partition.hpp"
#include "regen/rational.hpp"

namespace regen {

using nlohmann::json;

inline json to_json(const Rational& r) { return to_string(r); }

inline Rational rational_from_json(const json& j) {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_string()) return parse_rational(j.get<std::string>());
    throw validation_error("expected a rational as \"num/den\" string, got " + j.dump());
}

inline json to_json(const Partition& lambda) { return json(lambda.ranked()); }

inline Partition partition_from_json(const json& j) {
    if (!j.is_array()) throw validation_error("expected a partition as integer array, got " + j.dump());
    return Partition(j.get<std::vector<int>>());
}

inline json to_json(const Composition& c) { return json(c.parts()); }

inline Composition composition_from_json(const json& j) {
    if (!j.is_array())
        throw validation_error("expected a composition as integer array, got " + j.dump());
    return Composition(j.get<std::vector<int>>());
}

inline json to_json(const DecrementMatrix& matrix) {
    json rows = json::array();
    for (const DecrementRow& row : matrix.rows) {
        json r = json::array();
        for (const Rational& v : row.q) r.push_back(to_json(v));
        rows.push_back(std::move(r));
    }
    return json{{"n_max", matrix.n_max()}, {"rows", std::move(rows)}};
}

inline DecrementMatrix decrement_matrix_from_json(const json& j) {
    if (!j.contains("rows")) throw validation_error("decrement matrix: missing \"rows\"");
    DecrementMatrix matrix;
    int m = 0;
    for (const json& r : j.at("rows")) {
        ++m;
        DecrementRow row;
        row.n = m;
        for (const json& v : r) row.q.push_back(rational_from_json(v));
        if (static_cast<int>(row.q.size()) != m)
            throw validation_error("decrement matrix: row " + std::to_string(m) + " has " +
                                   std::to_string(row.q.size()) + " entries");
        row.validate("decrement matrix");
        matrix.rows.push_back(std::move(row));
    }
    if (matrix.rows.empty()) throw validation_error("decrement matrix: no rows");
    if (j.contains("n_max") && j.at("n_max").get<int>() != matrix.n_max())
        throw validation_error("decrement matrix: n_max does not match row count");
    return matrix;
}

/// Level file: every partition of every weight 1..n with its probability.
inline json to_json(const PartitionLevels& levels) {
    json entries = json::array();
    for (int m = 1; m <= levels.max_weight(); ++m)
        for (const auto& [lambda, p] : levels.at(m).probs)
            entries.push_back(json{{"partition", to_json(lambda)}, {"prob", to_json(p)}});
    return json{{"n", levels.max_weight()}, {"levels", std::move(entries)}};
}

inline PartitionLevels partition_levels_from_json(const json& j) {
    if (!j.contains("n") || !j.contains("levels"))
        throw validation_error("level file: expected {\"n\":..., \"levels\":[...]}");
    const int n = j.at("n").get<int>();
    if (n < 1) throw validation_error("level file: n must be positive");
    PartitionLevels out;
    out.levels.resize(static_cast<std::size_t>(n) + 1);
    out.levels[0] = trivial_level_zero();
    for (int m = 1; m <= n; ++m) out.levels[static_cast<std::size_t>(m)].n = m;
    for (const json& entry : j.at("levels")) {
        const Partition lambda = partition_from_json(entry.at("partition"));
        if (lambda.weight() < 1 || lambda.weight() > n)
            throw validation_error("level file: partition " + lambda.to_string() +
                                   " outside levels 1.." + std::to_string(n));
        auto& probs = out.levels[static_cast<std::size_t>(lambda.weight())].probs;
        if (!probs.emplace(lambda, rational_from_json(entry.at("prob"))).second)
            throw validation_error("level file: duplicate entry for " + lambda.to_string());
    }
    return out;
}

inline json to_json(const LevyMeasureSpec& spec) {
    json out = json::object();
    if (!spec.atoms().empty()) {
        json atoms = json::array();
        for (const LevyAtom& a : spec.atoms())
            atoms.push_back(json{{"u", to_json(a.location)}, {"w", to_json(a.weight)}});
        out["atoms"] = std::move(atoms);
    }
    if (spec.beta())
        out["beta"] = json{{"c", to_json(spec.beta()->moment_mass)},
                           {"sigma", to_json(spec.beta()->sigma)},
                           {"theta", to_json(spec.beta()->theta)}};
    out["drift"] = to_json(spec.drift());
    return out;
}

inline LevyMeasureSpec levy_spec_from_json(const json& j) {
    std::vector<LevyAtom> atoms;
    if (j.contains("atoms"))
        for (const json& a : j.at("atoms"))
            atoms.push_back(LevyAtom{rational_from_json(a.at("u")), rational_from_json(a.at("w"))});
    std::optional<BetaComponent> beta;
    if (j.contains("beta")) {
        const json& b = j.at("beta");
        beta = BetaComponent{rational_from_json(b.at("c")), rational_from_json(b.at("sigma")),
                             rational_from_json(b.at("theta"))};
    }
    Rational drift = j.contains("drift") ? rational_from_json(j.at("drift")) : Rational(0);
    return LevyMeasureSpec(std::move(atoms), std::move(beta), std::move(drift));
}

inline json to_json(const DeletionKernel& kernel) {
    switch (kernel.kind()) {
        case DeletionKernel::Kind::SizeBiased: return json{{"kernel", "size-biased"}};
        case DeletionKernel::Kind::Uniform: return json{{"kernel", "uniform"}};
        case DeletionKernel::Kind::Cosize: return json{{"kernel", "cosize"}};
        case DeletionKernel::Kind::Tau:
            return json{{"kernel", "tau"}, {"tau", to_json(kernel.tau_value())}};
        case DeletionKernel::Kind::Table: break;
    }
    throw validation_error("kernel serialization: table kernels are input-only");
}

inline DeletionKernel kernel_from_json(const json& j) {
    const std::string kind = j.at("kernel").get<std::string>();
    if (kind == "size-biased") return DeletionKernel::size_biased();
    if (kind == "uniform") return DeletionKernel::uniform();
    if (kind == "cosize") return DeletionKernel::cosize();
    if (kind == "tau") return DeletionKernel::tau(rational_from_json(j.at("tau")));
    if (kind == "table") {
        DeletionKernel::Table table;
        for (const json& e : j.at("entries"))
            table.emplace(std::make_pair(partition_from_json(e.at("partition")), e.at("part").get<int>()),
                          rational_from_json(e.at("d")));
        return DeletionKernel::table(std::move(table));
    }
    throw validation_error("unknown kernel kind: " + kind);
}

/// A model: one source for partition/composition laws.
struct ModelSpec {
    enum class Family { TwoParameter, Ewens, Paintbox, Decrement, Levels };

    Family family;
    std::optional<TwoParamModel> model;      // TwoParameter, Ewens
    std::optional<LevyMeasureSpec> paintbox; // Paintbox
    std::optional<DecrementMatrix> matrix;   // Decrement
    std::optional<PartitionLevels> levels;   // Levels

    std::string family_name() const {
        switch (family) {
            case Family::TwoParameter: return "two-parameter";
            case Family::Ewens: return "ewens";
            case Family::Paintbox: return "paintbox";
            case Family::Decrement: return "decrement";
            case Family::Levels: return "p-levels";
        }
        return "?";
    }
};

inline ModelSpec model_spec_from_json(const json& j) {
    const std::string family = j.at("family").get<std::string>();
    ModelSpec spec{ModelSpec::Family::TwoParameter, std::nullopt, std::nullopt, std::nullopt,
                   std::nullopt};
    if (family == "two-parameter") {
        const bool extended = j.contains("extended") && j.at("extended").get<bool>();
        spec.family = ModelSpec::Family::TwoParameter;
        spec.model = TwoParamModel(rational_from_json(j.at("alpha")), rational_from_json(j.at("theta")),
                                   extended);
    } else if (family == "ewens") {
        spec.family = ModelSpec::Family::Ewens;
        spec.model = TwoParamModel::ewens(rational_from_json(j.at("theta")));
    } else if (family == "paintbox") {
        spec.family = ModelSpec::Family::Paintbox;
        spec.paintbox = levy_spec_from_json(j);
    } else if (family == "decrement") {
        spec.family = ModelSpec::Family::Decrement;
        spec.matrix = decrement_matrix_from_json(j);
    } else if (family == "p-levels") {
        spec.family = ModelSpec::Family::Levels;
        spec.levels = partition_levels_from_json(j);
    } else {
        throw validation_error("unknown model family: " + family);
    }
    return spec;
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw validation_error(path + ": " + e.what());
    }
    return j;
}

} // namespace regen

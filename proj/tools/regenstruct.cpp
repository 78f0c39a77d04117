/**
 * @file regenstruct.cpp
 * @brief Command-line surface: exact tables and seeded samplers for
 *        regenerative partition and composition structures.
 *
 * Exit codes: 0 success, 2 validation/parse/domain failure, 3 negative
 * verdict (a structure that is not regenerative), so scripts can branch on
 * regenerativity.
 */

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "regen/regen.hpp"

namespace {

using namespace regen;

constexpr int kExitValidation = 2;
constexpr int kExitVerdictNo = 3;

/// A structure was decided not regenerative; maps to exit code 3.
class verdict_no_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CommonOptions {
    bool json = false;
    int digits = 12;
    std::optional<int> limit;
};

struct ModelOptions {
    std::optional<std::string> alpha;
    std::optional<std::string> theta;
    bool extended = false;
    std::optional<std::string> paintbox_path;
    std::optional<std::string> decrement_path;
    std::optional<std::string> p_file_path;
    std::optional<std::string> model_path;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_flag("--json", opts.json, "emit JSON instead of CSV");
    cmd->add_option("--digits", opts.digits, "decimal digits in display columns")
        ->default_val(12)
        ->check(CLI::Range(0, 64));
}

void add_limit(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--limit", opts.limit,
                    "override the enumeration cap (enumeration cost grows exponentially with n)");
}

void add_model(CLI::App* cmd, ModelOptions& opts) {
    cmd->add_option("--alpha", opts.alpha, "two-parameter alpha (rational)");
    cmd->add_option("--theta", opts.theta, "two-parameter / Ewens theta (rational)");
    cmd->add_flag("--extended", opts.extended,
                  "admit the extended range 0<alpha<1, theta>-alpha");
    cmd->add_option("--paintbox", opts.paintbox_path, "paintbox measure spec (JSON file)");
    cmd->add_option("--decrement", opts.decrement_path, "decrement matrix (JSON file)");
    cmd->add_option("--p-file", opts.p_file_path, "partition-level file (JSON)");
    cmd->add_option("--model", opts.model_path, "model spec (JSON file)");
}

/// Enumeration cap: explicit flag wins, then REGEN_STRUCT_LIMIT, then the
/// built-in default.
int effective_limit(const CommonOptions& opts, int fallback) {
    if (opts.limit) return *opts.limit;
    if (const char* env = std::getenv("REGEN_STRUCT_LIMIT")) return std::atoi(env);
    return fallback;
}

ModelSpec resolve_model(const ModelOptions& opts) {
    int sources = 0;
    sources += opts.alpha || opts.theta ? 1 : 0;
    sources += opts.paintbox_path ? 1 : 0;
    sources += opts.decrement_path ? 1 : 0;
    sources += opts.p_file_path ? 1 : 0;
    sources += opts.model_path ? 1 : 0;
    if (sources != 1)
        throw validation_error(
            "exactly one model source expected: --alpha/--theta, --paintbox, --decrement, "
            "--p-file or --model");

    ModelSpec spec{ModelSpec::Family::TwoParameter, std::nullopt, std::nullopt, std::nullopt,
                   std::nullopt};
    if (opts.model_path) return model_spec_from_json(load_json_file(*opts.model_path));
    if (opts.alpha || opts.theta) {
        if (!opts.theta) throw validation_error("--alpha requires --theta");
        const Rational theta = parse_rational(*opts.theta);
        if (opts.alpha) {
            spec.family = ModelSpec::Family::TwoParameter;
            spec.model = TwoParamModel(parse_rational(*opts.alpha), theta, opts.extended);
        } else {
            spec.family = ModelSpec::Family::Ewens;
            spec.model = TwoParamModel::ewens(theta);
        }
        return spec;
    }
    if (opts.paintbox_path) {
        spec.family = ModelSpec::Family::Paintbox;
        spec.paintbox = levy_spec_from_json(load_json_file(*opts.paintbox_path));
        return spec;
    }
    if (opts.decrement_path) {
        spec.family = ModelSpec::Family::Decrement;
        spec.matrix = decrement_matrix_from_json(load_json_file(*opts.decrement_path));
        return spec;
    }
    spec.family = ModelSpec::Family::Levels;
    spec.levels = partition_levels_from_json(load_json_file(*opts.p_file_path));
    return spec;
}

/// Deleted-part triangle of a model at levels 1..n. For a p-file model this
/// runs the regenerativity decision and throws its witness on a No verdict.
DecrementMatrix model_matrix(const ModelSpec& spec, int n) {
    switch (spec.family) {
        case ModelSpec::Family::TwoParameter:
        case ModelSpec::Family::Ewens:
            return full_matrix(two_param_decrement(*spec.model, n));
        case ModelSpec::Family::Paintbox:
            return full_matrix(decrement_from_paintbox(*spec.paintbox, n));
        case ModelSpec::Family::Decrement: {
            if (n > spec.matrix->n_max())
                throw validation_error("decrement matrix only covers levels up to " +
                                       std::to_string(spec.matrix->n_max()));
            DecrementMatrix trimmed;
            trimmed.rows.assign(spec.matrix->rows.begin(), spec.matrix->rows.begin() + n);
            return trimmed;
        }
        case ModelSpec::Family::Levels: break;
    }
    if (spec.levels->max_weight() < n)
        throw validation_error("p-file only covers levels up to " +
                               std::to_string(spec.levels->max_weight()));
    RegenerativityVerdict verdict = regenerativity_check(*spec.levels);
    if (!verdict.regenerative())
        throw verdict_no_error("structure is not regenerative: " + verdict.witness->describe());
    DecrementMatrix trimmed;
    trimmed.rows.assign(verdict.matrix->rows.begin(), verdict.matrix->rows.begin() + n);
    return trimmed;
}

std::string csv_partition(const Partition& lambda) {
    std::string s;
    for (int p : lambda.ranked()) {
        if (!s.empty()) s += '+';
        s += std::to_string(p);
    }
    return s.empty() ? "0" : s;
}

std::string csv_composition(const Composition& c) {
    std::string s;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) s += '+';
        s += std::to_string(c[i]);
    }
    return s.empty() ? "0" : s;
}

DeletionKernel kernel_from_flags(const std::string& kind, const std::optional<std::string>& tau,
                                 const std::optional<std::string>& spec_path) {
    if (spec_path) return kernel_from_json(load_json_file(*spec_path));
    if (kind == "size-biased") return DeletionKernel::size_biased();
    if (kind == "uniform") return DeletionKernel::uniform();
    if (kind == "cosize") return DeletionKernel::cosize();
    if (kind == "tau") {
        if (!tau) throw validation_error("--kernel tau requires --tau");
        return DeletionKernel::tau(parse_rational(*tau));
    }
    throw validation_error("unknown kernel kind: " + kind);
}

// ---------------------------------------------------------------------------
// Subcommand bodies
// ---------------------------------------------------------------------------

int run_eppf(const ModelOptions& model_opts, const CommonOptions& common, int n, bool emit_levels) {
    const ModelSpec spec = resolve_model(model_opts);
    if (!spec.model)
        throw validation_error("eppf needs a two-parameter or Ewens model");
    const int limit = effective_limit(common, kDefaultPartitionLimit);

    if (emit_levels) {
        std::cout << to_json(partition_levels(*spec.model, n, limit)).dump(2) << "\n";
        return 0;
    }

    const PartitionDistribution dist = partition_distribution(*spec.model, n, limit);
    if (common.json) {
        json rows = json::array();
        for (const Partition& lambda : enumerate_partitions(n, limit))
            rows.push_back(json{{"partition", to_json(lambda)},
                                {"prob", to_json(dist.at(lambda))},
                                {"decimal", to_decimal_string(dist.at(lambda), common.digits)}});
        std::cout << json{{"n", n}, {"rows", rows}, {"total", to_json(dist.total())}}.dump(2)
                  << "\n";
    } else {
        std::cout << "partition,prob,decimal\n";
        for (const Partition& lambda : enumerate_partitions(n, limit))
            std::cout << csv_partition(lambda) << ',' << to_string(dist.at(lambda)) << ','
                      << to_decimal_string(dist.at(lambda), common.digits) << "\n";
        std::cout << "total," << to_string(dist.total()) << ','
                  << to_decimal_string(dist.total(), common.digits) << "\n";
    }
    return 0;
}

int run_kernel(const std::string& kind, const std::optional<std::string>& tau,
               const std::optional<std::string>& spec_path, const CommonOptions& common, int n) {
    const DeletionKernel kernel = kernel_from_flags(kind, tau, spec_path);
    const int limit = effective_limit(common, kDefaultPartitionLimit);
    if (common.json) {
        json rows = json::array();
        for (const Partition& lambda : enumerate_partitions(n, limit))
            for (const auto& [x, a] : lambda.multiplicities())
                rows.push_back(json{{"partition", to_json(lambda)},
                                    {"part", x},
                                    {"d", to_json(kernel.value(lambda, x))},
                                    {"decimal", to_decimal_string(kernel.value(lambda, x), common.digits)}});
        std::cout << json{{"n", n}, {"kernel", kernel.describe()}, {"rows", rows}}.dump(2) << "\n";
    } else {
        std::cout << "partition,part,d,decimal\n";
        for (const Partition& lambda : enumerate_partitions(n, limit))
            for (const auto& [x, a] : lambda.multiplicities())
                std::cout << csv_partition(lambda) << ',' << x << ','
                          << to_string(kernel.value(lambda, x)) << ','
                          << to_decimal_string(kernel.value(lambda, x), common.digits) << "\n";
    }
    return 0;
}

int run_decrement(const ModelOptions& model_opts, const CommonOptions& common, int n) {
    const ModelSpec spec = resolve_model(model_opts);
    const DecrementMatrix matrix = model_matrix(spec, n);
    if (common.json) {
        json out = to_json(matrix);
        json decimals = json::array();
        for (const DecrementRow& row : matrix.rows) {
            json r = json::array();
            for (const Rational& v : row.q) r.push_back(to_decimal_string(v, common.digits));
            decimals.push_back(std::move(r));
        }
        out["decimal"] = std::move(decimals);
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "level,part,q,decimal\n";
        for (int m = 1; m <= matrix.n_max(); ++m)
            for (int x = 1; x <= m; ++x)
                std::cout << m << ',' << x << ',' << to_string(matrix.at(m, x)) << ','
                          << to_decimal_string(matrix.at(m, x), common.digits) << "\n";
    }
    return 0;
}

int run_project(const std::string& matrix_path, int m, const CommonOptions& common) {
    const DecrementMatrix matrix = decrement_matrix_from_json(load_json_file(matrix_path));
    const DecrementRow projected = hypgeom_project(matrix.row(matrix.n_max()), m);
    if (common.json) {
        json q = json::array();
        json decimal = json::array();
        for (const Rational& v : projected.q) {
            q.push_back(to_json(v));
            decimal.push_back(to_decimal_string(v, common.digits));
        }
        std::cout << json{{"n", projected.n}, {"q", q}, {"decimal", decimal}}.dump(2) << "\n";
    } else {
        std::cout << "part,q,decimal\n";
        for (int x = 1; x <= projected.n; ++x)
            std::cout << x << ',' << to_string(projected.at(x)) << ','
                      << to_decimal_string(projected.at(x), common.digits) << "\n";
    }
    return 0;
}

int run_regen_check(const std::string& p_file, const std::optional<std::string>& kernel_kind,
                    const std::optional<std::string>& tau,
                    const std::optional<std::string>& kernel_spec, const CommonOptions& common) {
    const PartitionLevels levels = partition_levels_from_json(load_json_file(p_file));
    const RegenerativityVerdict verdict = regenerativity_check(levels);

    json out;
    out["regenerative"] = verdict.regenerative();
    if (verdict.regenerative()) {
        out["matrix"] = to_json(*verdict.matrix);
    } else {
        out["witness"] = json{{"level", verdict.witness->level},
                              {"partition", to_json(verdict.witness->lambda)},
                              {"part", verdict.witness->part},
                              {"value", to_json(verdict.witness->value)},
                              {"reason", verdict.witness->reason}};
    }
    if (kernel_kind || kernel_spec) {
        const DeletionKernel kernel = kernel_from_flags(kernel_kind.value_or("tau"), tau, kernel_spec);
        const RegenResidual residual = regen_residual(levels, kernel);
        out["kernel"] = kernel.describe();
        out["residual"] = to_json(residual.value);
        if (residual.value != 0)
            out["residual_witness"] = json{{"level", residual.level},
                                           {"partition", to_json(residual.lambda)},
                                           {"part", residual.part}};
    }

    if (common.json) {
        std::cout << out.dump(2) << "\n";
    } else if (verdict.regenerative()) {
        std::cout << "verdict: regenerative\n";
        for (int m = 1; m <= verdict.matrix->n_max(); ++m)
            for (int x = 1; x <= m; ++x)
                std::cout << "q(" << m << ',' << x << ") = " << to_string(verdict.matrix->at(m, x))
                          << "\n";
        if (out.contains("residual"))
            std::cout << "kernel " << out["kernel"].get<std::string>() << " residual "
                      << out["residual"].get<std::string>() << "\n";
    } else {
        std::cout << "verdict: not regenerative\n";
        std::cout << "witness: " << verdict.witness->describe() << "\n";
    }
    return verdict.regenerative() ? 0 : kExitVerdictNo;
}

int run_chain(const ModelOptions& model_opts, const CommonOptions& common, int n,
              const std::string& kind, const std::string& mode, std::uint64_t steps,
              std::uint64_t burnin, std::uint64_t seed) {
    const ModelSpec spec = resolve_model(model_opts);
    const DecrementRow row = model_matrix(spec, n).row(n);

    if (mode == "stationary") {
        json states = json::array();
        auto emit = [&](const std::string& label, const json& state, const Rational& p) {
            states.push_back(json{{"state", state}, {"prob", to_json(p)},
                                  {"decimal", to_decimal_string(p, common.digits)}});
            if (!common.json)
                std::cout << label << ',' << to_string(p) << ','
                          << to_decimal_string(p, common.digits) << "\n";
        };
        if (!common.json) std::cout << "state,prob,decimal\n";
        if (kind == "composition") {
            const auto chain = composition_chain(n, row, effective_limit(common, kCompositionChainLimit));
            const auto pi = stationary(chain);
            for (const auto& [state, p] : pi) emit(csv_composition(state), to_json(state), p);
        } else if (kind == "partition") {
            const auto chain = partition_chain(n, row, effective_limit(common, kPartitionChainLimit));
            const auto pi = stationary(chain);
            for (const auto& [state, p] : pi) emit(csv_partition(state), to_json(state), p);
        } else if (kind == "fragperm") {
            const auto chain = fragperm_chain(n, row, effective_limit(common, kFragPermChainLimit));
            const auto pi = stationary(chain);
            for (const auto& [state, p] : pi) emit(state.to_string(), json(state.to_string()), p);
        } else {
            throw validation_error("unknown chain kind: " + kind);
        }
        if (common.json)
            std::cout << json{{"n", n}, {"kind", kind}, {"mode", "stationary"}, {"states", states}}.dump(2)
                      << "\n";
        return 0;
    }

    if (mode != "simulate") throw validation_error("mode must be stationary or simulate");

    // Occupancy counts over `steps` states after a burn-in, compared with the
    // exact stationary law state by state.
    json rows = json::array();
    bool all_within = true;
    Rational max_dev = 0;
    if (!common.json) std::cout << "state,count,exact,decimal,within_3sigma\n";
    auto tally = [&](const auto& pi, const auto& occupancy, const auto& label, const auto& to_js) {
        for (const auto& [state, p] : pi) {
            const auto it = occupancy.find(state);
            const std::uint64_t count = it == occupancy.end() ? 0 : it->second;
            const bool ok = within_three_sigma(count, steps, p);
            all_within = all_within && ok;
            Rational dev = Rational(count, steps) - p;
            if (dev < 0) dev = -dev;
            if (dev > max_dev) max_dev = dev;
            rows.push_back(json{{"state", to_js(state)},
                                {"count", count},
                                {"exact", to_json(p)},
                                {"within_3sigma", ok}});
            if (!common.json)
                std::cout << label(state) << ',' << count << ',' << to_string(p) << ','
                          << to_decimal_string(p, common.digits) << ',' << (ok ? "yes" : "no")
                          << "\n";
        }
    };

    RandomGenerator gen(seed);
    if (kind == "composition") {
        Composition state({n});
        for (std::uint64_t i = 0; i < burnin; ++i) state = step_composition(state, row, gen);
        std::map<Composition, std::uint64_t> occupancy;
        for (std::uint64_t i = 0; i < steps; ++i) {
            state = step_composition(state, row, gen);
            ++occupancy[state];
        }
        const auto pi = stationary(composition_chain(n, row, effective_limit(common, kCompositionChainLimit)));
        tally(pi, occupancy, [](const Composition& c) { return csv_composition(c); },
              [](const Composition& c) { return to_json(c); });
    } else if (kind == "partition") {
        Partition state = Partition::single(n);
        for (std::uint64_t i = 0; i < burnin; ++i) state = step_partition(state, row, gen);
        std::map<Partition, std::uint64_t> occupancy;
        for (std::uint64_t i = 0; i < steps; ++i) {
            state = step_partition(state, row, gen);
            ++occupancy[state];
        }
        const auto pi = stationary(partition_chain(n, row, effective_limit(common, kPartitionChainLimit)));
        tally(pi, occupancy, [](const Partition& p) { return csv_partition(p); },
              [](const Partition& p) { return to_json(p); });
    } else if (kind == "fragperm") {
        std::vector<int> identity(static_cast<std::size_t>(n));
        std::iota(identity.begin(), identity.end(), 1);
        FragmentedPermutation state{identity, Composition({n})};
        for (std::uint64_t i = 0; i < burnin; ++i) state = step_fragperm(state, row, gen);
        std::map<FragmentedPermutation, std::uint64_t> occupancy;
        for (std::uint64_t i = 0; i < steps; ++i) {
            state = step_fragperm(state, row, gen);
            ++occupancy[state];
        }
        const auto pi = stationary(fragperm_chain(n, row, effective_limit(common, kFragPermChainLimit)));
        tally(pi, occupancy, [](const FragmentedPermutation& f) { return f.to_string(); },
              [](const FragmentedPermutation& f) { return json(f.to_string()); });
    } else {
        throw validation_error("unknown chain kind: " + kind);
    }

    if (common.json)
        std::cout << json{{"n", n},
                          {"kind", kind},
                          {"mode", "simulate"},
                          {"seed", seed},
                          {"steps", steps},
                          {"burnin", burnin},
                          {"max_abs_deviation", to_json(max_dev)},
                          {"all_within_3sigma", all_within},
                          {"occupancy", rows}}.dump(2)
                  << "\n";
    else
        std::cout << "max_abs_deviation," << to_string(max_dev) << ','
                  << to_decimal_string(max_dev, common.digits) << ','
                  << (all_within ? "yes" : "no") << "\n";
    return 0;
}

int run_sample(const ModelOptions& model_opts, const CommonOptions& common, int n,
               std::uint64_t count, std::uint64_t seed, std::string method, bool report) {
    const ModelSpec spec = resolve_model(model_opts);
    if (method == "auto")
        method = spec.family == ModelSpec::Family::Paintbox ? "paintbox" : "residual";

    if (method == "paintbox") {
        if (spec.family != ModelSpec::Family::Paintbox)
            throw validation_error("--method paintbox needs a --paintbox model");
        if (report) {
            const int limit = effective_limit(common, kDefaultCompositionLimit);
            const PaintboxSampleReport r = run_paintbox_sample(*spec.paintbox, n, count, seed, limit);
            json rows = json::array();
            bool all_within = true;
            for (const Composition& c : enumerate_compositions(n, limit)) {
                const auto it = r.empirical.find(c);
                const std::uint64_t k = it == r.empirical.end() ? 0 : it->second;
                const auto ex = r.exact.find(c);
                const Rational p = ex == r.exact.end() ? Rational(0) : ex->second;
                const bool ok = within_three_sigma(k, r.sample_count, p);
                all_within = all_within && ok;
                rows.push_back(json{{"composition", to_json(c)},
                                    {"count", k},
                                    {"exact", to_json(p)},
                                    {"within_3sigma", ok}});
            }
            std::cout << json{{"n", r.n},
                              {"samples", r.sample_count},
                              {"seed", r.seed},
                              {"max_abs_deviation", to_json(r.max_abs_deviation)},
                              {"all_within_3sigma", all_within},
                              {"frequencies", rows}}.dump(2)
                      << "\n";
            return 0;
        }
        RandomGenerator gen(seed);
        for (std::uint64_t i = 0; i < count; ++i)
            std::cout << to_json(sample_composition_via_paintbox(*spec.paintbox, n, gen)).dump()
                      << "\n";
        return 0;
    }

    if (method != "residual") throw validation_error("method must be residual or paintbox");
    const DecrementMatrix matrix = model_matrix(spec, n);
    RandomGenerator gen(seed);
    if (report) {
        std::map<Composition, std::uint64_t> empirical;
        for (std::uint64_t i = 0; i < count; ++i) ++empirical[sample_composition(matrix, n, gen)];
        const int limit = effective_limit(common, kDefaultCompositionLimit);
        const CompositionDistribution law = composition_distribution(matrix, n, limit);
        json rows = json::array();
        bool all_within = true;
        Rational max_dev = 0;
        for (const Composition& c : enumerate_compositions(n, limit)) {
            const auto it = empirical.find(c);
            const std::uint64_t k = it == empirical.end() ? 0 : it->second;
            const Rational p = law.at(c);
            const bool ok = within_three_sigma(k, count, p);
            all_within = all_within && ok;
            Rational dev = Rational(k, count) - p;
            if (dev < 0) dev = -dev;
            if (dev > max_dev) max_dev = dev;
            rows.push_back(json{{"composition", to_json(c)},
                                {"count", k},
                                {"exact", to_json(p)},
                                {"within_3sigma", ok}});
        }
        std::cout << json{{"n", n},
                          {"samples", count},
                          {"seed", seed},
                          {"max_abs_deviation", to_json(max_dev)},
                          {"all_within_3sigma", all_within},
                          {"frequencies", rows}}.dump(2)
                  << "\n";
        return 0;
    }
    for (std::uint64_t i = 0; i < count; ++i)
        std::cout << to_json(sample_composition(matrix, n, gen)).dump() << "\n";
    return 0;
}

int run_paintbox_table(const std::string& spec_path, const CommonOptions& common, int n) {
    const LevyMeasureSpec spec = levy_spec_from_json(load_json_file(spec_path));
    const Rational phi = laplace_exponent(spec, n);
    if (common.json) {
        json rows = json::array();
        for (int r = 1; r <= n; ++r) {
            const Rational p = phi_nr(spec, n, r);
            rows.push_back(json{{"r", r},
                                {"phi", to_json(p)},
                                {"q", to_json(p / phi)},
                                {"decimal", to_decimal_string(p / phi, common.digits)}});
        }
        std::cout << json{{"n", n}, {"laplace_exponent", to_json(phi)}, {"rows", rows}}.dump(2)
                  << "\n";
    } else {
        std::cout << "r,phi,q,decimal\n";
        for (int r = 1; r <= n; ++r) {
            const Rational p = phi_nr(spec, n, r);
            std::cout << r << ',' << to_string(p) << ',' << to_string(p / phi) << ','
                      << to_decimal_string(p / phi, common.digits) << "\n";
        }
        std::cout << "total," << to_string(phi) << ",1," << to_decimal_string(Rational(1), common.digits)
                  << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact toolkit for regenerative partition and composition structures"};
    app.require_subcommand(1);

    // eppf
    CommonOptions eppf_common;
    ModelOptions eppf_model;
    int eppf_n = 0;
    bool eppf_levels = false;
    CLI::App* eppf_cmd = app.add_subcommand("eppf", "partition probabilities of a model");
    add_model(eppf_cmd, eppf_model);
    add_common(eppf_cmd, eppf_common);
    add_limit(eppf_cmd, eppf_common);
    eppf_cmd->add_option("--n", eppf_n, "partition weight")->required();
    eppf_cmd->add_flag("--levels", eppf_levels, "emit the level file for weights 1..n as JSON");

    // kernel
    CommonOptions kernel_common;
    std::string kernel_kind = "size-biased";
    std::optional<std::string> kernel_tau;
    std::optional<std::string> kernel_spec_path;
    int kernel_n = 0;
    CLI::App* kernel_cmd = app.add_subcommand("kernel", "deletion-kernel table over partitions of n");
    kernel_cmd->add_option("--kind", kernel_kind, "size-biased | uniform | cosize | tau");
    kernel_cmd->add_option("--tau", kernel_tau, "tau parameter (rational in [0,1])");
    kernel_cmd->add_option("--spec", kernel_spec_path, "kernel spec JSON file");
    kernel_cmd->add_option("--n", kernel_n, "partition weight")->required();
    add_common(kernel_cmd, kernel_common);
    add_limit(kernel_cmd, kernel_common);

    // decrement
    CommonOptions dec_common;
    ModelOptions dec_model;
    int dec_n = 0;
    CLI::App* dec_cmd = app.add_subcommand("decrement", "decrement matrix of a model, levels 1..n");
    add_model(dec_cmd, dec_model);
    add_common(dec_cmd, dec_common);
    add_limit(dec_cmd, dec_common);
    dec_cmd->add_option("--n", dec_n, "top level")->required();

    // project
    CommonOptions proj_common;
    std::string proj_path;
    int proj_m = 0;
    CLI::App* proj_cmd =
        app.add_subcommand("project", "project the top row of a decrement matrix to a lower level");
    proj_cmd->add_option("--decrement", proj_path, "decrement matrix JSON file")->required();
    proj_cmd->add_option("--m", proj_m, "target level")->required();
    add_common(proj_cmd, proj_common);

    // regen-check
    CommonOptions check_common;
    std::string check_p_file;
    std::optional<std::string> check_kernel;
    std::optional<std::string> check_tau;
    std::optional<std::string> check_kernel_spec;
    CLI::App* check_cmd =
        app.add_subcommand("regen-check", "decide regenerativity of a partition-level file");
    check_cmd->add_option("--p-file", check_p_file, "partition-level JSON file")->required();
    check_cmd->add_option("--kernel", check_kernel, "also report the regeneration residual under this kernel");
    check_cmd->add_option("--tau", check_tau, "tau parameter for --kernel tau");
    check_cmd->add_option("--kernel-spec", check_kernel_spec, "kernel spec JSON file");
    add_common(check_cmd, check_common);

    // chain
    CommonOptions chain_common;
    ModelOptions chain_model;
    int chain_n = 0;
    std::string chain_kind = "composition";
    std::string chain_mode = "stationary";
    std::uint64_t chain_steps = 100000;
    std::uint64_t chain_burnin = 1000;
    std::uint64_t chain_seed = 1;
    CLI::App* chain_cmd = app.add_subcommand("chain", "exact stationary law or seeded simulation");
    add_model(chain_cmd, chain_model);
    add_common(chain_cmd, chain_common);
    add_limit(chain_cmd, chain_common);
    chain_cmd->add_option("--n", chain_n, "level")->required();
    chain_cmd->add_option("--kind", chain_kind, "composition | partition | fragperm");
    chain_cmd->add_option("--mode", chain_mode, "stationary | simulate");
    chain_cmd->add_option("--steps", chain_steps, "simulation steps");
    chain_cmd->add_option("--burnin", chain_burnin, "burn-in steps");
    chain_cmd->add_option("--seed", chain_seed, "random seed");

    // sample
    CommonOptions sample_common;
    ModelOptions sample_model;
    int sample_n = 0;
    std::uint64_t sample_count = 1;
    std::uint64_t sample_seed = 1;
    std::string sample_method = "auto";
    bool sample_report = false;
    CLI::App* sample_cmd = app.add_subcommand("sample", "draw compositions from a model");
    add_model(sample_cmd, sample_model);
    add_common(sample_cmd, sample_common);
    add_limit(sample_cmd, sample_common);
    sample_cmd->add_option("--n", sample_n, "composition weight")->required();
    sample_cmd->add_option("--count", sample_count, "number of draws");
    sample_cmd->add_option("--seed", sample_seed, "random seed");
    sample_cmd->add_option("--method", sample_method, "auto | residual | paintbox");
    sample_cmd->add_flag("--report", sample_report, "emit a frequency report instead of raw draws");

    // paintbox
    CommonOptions pb_common;
    std::string pb_spec;
    int pb_n = 0;
    CLI::App* pb_cmd = app.add_subcommand("paintbox", "moment table and decrement row of a measure spec");
    pb_cmd->add_option("--spec", pb_spec, "measure spec JSON file")->required();
    pb_cmd->add_option("--n", pb_n, "level")->required();
    add_common(pb_cmd, pb_common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (eppf_cmd->parsed()) return run_eppf(eppf_model, eppf_common, eppf_n, eppf_levels);
        if (kernel_cmd->parsed())
            return run_kernel(kernel_kind, kernel_tau, kernel_spec_path, kernel_common, kernel_n);
        if (dec_cmd->parsed()) return run_decrement(dec_model, dec_common, dec_n);
        if (proj_cmd->parsed()) return run_project(proj_path, proj_m, proj_common);
        if (check_cmd->parsed())
            return run_regen_check(check_p_file, check_kernel, check_tau, check_kernel_spec,
                                   check_common);
        if (chain_cmd->parsed())
            return run_chain(chain_model, chain_common, chain_n, chain_kind, chain_mode, chain_steps,
                             chain_burnin, chain_seed);
        if (sample_cmd->parsed())
            return run_sample(sample_model, sample_common, sample_n, sample_count, sample_seed,
                              sample_method, sample_report);
        if (pb_cmd->parsed()) return run_paintbox_table(pb_spec, pb_common, pb_n);
    } catch (const verdict_no_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerdictNo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (...) {
        std::cerr << "error: unexpected failure\n";
        return kExitValidation;
    }
    return 0;
}

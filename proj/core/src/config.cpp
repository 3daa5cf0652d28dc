#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "gpucb/error.hpp"
#include "gpucb/experiment.hpp"
#include "gpucb/table.hpp"

namespace gpucb {

using nlohmann::json;

namespace {

constexpr std::size_t kMaxGridPoints = 5000;

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) { out += sep; }
        out += parts[i];
    }
    return out;
}

// Collects every validation problem instead of stopping at the first one.
class Validator {
public:
    std::vector<std::string> errors;

    void fail(const std::string& path, const std::string& message) { errors.push_back(path + ": " + message); }

    bool object(const json& j, const std::string& path) {
        if (!j.is_object()) {
            fail(path, "expected an object");
            return false;
        }
        return true;
    }

    void only_keys(const json& j, const std::string& path, std::initializer_list<std::string_view> allowed) {
        for (const auto& [key, value] : j.items()) {
            if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
                fail(path.empty() ? key : path + "." + key, "unknown key");
            }
        }
    }

    void reject(const json& j, const std::string& path, std::string_view key, const std::string& why) {
        if (j.contains(key)) { fail(path + "." + std::string(key), why); }
    }

    const json* field(const json& j, const std::string& path, std::string_view key, bool required) {
        const auto it = j.find(key);
        if (it == j.end()) {
            if (required) { fail(path.empty() ? std::string(key) : path + "." + std::string(key), "missing required field"); }
            return nullptr;
        }
        return &*it;
    }

    static std::string sub(const std::string& path, std::string_view key) {
        return path.empty() ? std::string(key) : path + "." + std::string(key);
    }

    std::optional<double> number(const json& j, const std::string& path, std::string_view key, bool required,
                                 const std::function<bool(double)>& valid = {}, const std::string& constraint = {}) {
        const json* v = field(j, path, key, required);
        if (v == nullptr) { return std::nullopt; }
        if (!v->is_number()) {
            fail(sub(path, key), "expected a number");
            return std::nullopt;
        }
        const double x = v->get<double>();
        if (!std::isfinite(x) || (valid && !valid(x))) {
            fail(sub(path, key), "must be " + (constraint.empty() ? std::string("finite") : constraint));
            return std::nullopt;
        }
        return x;
    }

    std::optional<std::uint64_t> integer(const json& j, const std::string& path, std::string_view key, bool required,
                                         std::uint64_t minimum = 0) {
        const json* v = field(j, path, key, required);
        if (v == nullptr) { return std::nullopt; }
        if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<std::int64_t>() >= 0)) {
            fail(sub(path, key), "expected a nonnegative integer");
            return std::nullopt;
        }
        const auto x = v->get<std::uint64_t>();
        if (x < minimum) {
            fail(sub(path, key), "must be >= " + std::to_string(minimum));
            return std::nullopt;
        }
        return x;
    }

    std::optional<std::string> string(const json& j, const std::string& path, std::string_view key, bool required) {
        const json* v = field(j, path, key, required);
        if (v == nullptr) { return std::nullopt; }
        if (!v->is_string()) {
            fail(sub(path, key), "expected a string");
            return std::nullopt;
        }
        return v->get<std::string>();
    }

    std::optional<std::vector<std::uint64_t>> seeds(const json& j, const std::string& path, std::string_view key) {
        const json* v = field(j, path, key, false);
        if (v == nullptr) { return std::nullopt; }
        const std::string p = sub(path, key);
        if (!v->is_array() || v->empty()) {
            fail(p, "expected a nonempty array of seeds");
            return std::nullopt;
        }
        std::vector<std::uint64_t> out;
        for (std::size_t i = 0; i < v->size(); ++i) {
            const json& s = (*v)[i];
            if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0)) {
                fail(p + "[" + std::to_string(i) + "]", "expected a nonnegative integer");
                return std::nullopt;
            }
            out.push_back(s.get<std::uint64_t>());
        }
        std::set<std::uint64_t> unique(out.begin(), out.end());
        if (unique.size() != out.size()) {
            fail(p, "seeds must be distinct");
            return std::nullopt;
        }
        return out;
    }
};

std::optional<Kernel> parse_kernel(Validator& v, const json& j) {
    const std::string path = "kernel";
    if (!v.object(j, path)) { return std::nullopt; }
    v.only_keys(j, path, {"family", "lengthscale", "nu", "signal_variance"});
    const auto family = v.string(j, path, "family", true);
    const auto s2 = v.number(j, path, "signal_variance", false, [](double x) { return x > 0; }, "> 0");
    const double signal = s2.value_or(1.0);
    if (!family) { return std::nullopt; }

    if (*family == "linear") {
        v.reject(j, path, "lengthscale", "not used by the linear kernel");
        v.reject(j, path, "nu", "not used by the linear kernel");
        return Kernel::linear(signal);
    }
    if (*family != "squared_exponential" && *family != "matern") {
        v.fail(path + ".family", "must be one of linear, squared_exponential, matern");
        return std::nullopt;
    }
    const auto l = v.number(j, path, "lengthscale", true, [](double x) { return x > 0; }, "> 0");
    if (*family == "squared_exponential") {
        v.reject(j, path, "nu", "only used by the matern kernel");
        if (!l) { return std::nullopt; }
        return Kernel::squared_exponential(*l, signal);
    }

    std::optional<MaternNu> nu;
    if (const json* n = v.field(j, path, "nu", true)) {
        const std::string s = n->is_string() ? n->get<std::string>() : n->is_number() ? std::to_string(n->get<double>()) : "";
        if (s == "1/2" || (n->is_number() && n->get<double>() == 0.5)) {
            nu = MaternNu::Half;
        } else if (s == "3/2" || (n->is_number() && n->get<double>() == 1.5)) {
            nu = MaternNu::ThreeHalves;
        } else if (s == "5/2" || (n->is_number() && n->get<double>() == 2.5)) {
            nu = MaternNu::FiveHalves;
        } else {
            v.fail(path + ".nu", "must be one of 1/2, 3/2, 5/2 (or 0.5, 1.5, 2.5)");
        }
    }
    if (!l || !nu) { return std::nullopt; }
    return Kernel::matern(*nu, *l, signal);
}

std::optional<GridSpec> parse_grid(Validator& v, const json& j) {
    const std::string path = "domain.grid";
    if (!v.object(j, path)) { return std::nullopt; }
    v.only_keys(j, path, {"dimension", "points_per_dim", "bounds"});
    const auto d = v.integer(j, path, "dimension", true, 1);
    const auto m = v.integer(j, path, "points_per_dim", true, 1);
    if (!d || !m) { return std::nullopt; }

    GridSpec grid;
    grid.dimension = *d;
    grid.points_per_dim = *m;
    double total = 1.0;
    for (std::size_t i = 0; i < grid.dimension; ++i) { total *= static_cast<double>(grid.points_per_dim); }
    if (total > static_cast<double>(kMaxGridPoints)) {
        v.fail(path, "grid has more than " + std::to_string(kMaxGridPoints) + " points");
        return std::nullopt;
    }

    if (const json* b = v.field(j, path, "bounds", false)) {
        if (!b->is_array() || b->size() != grid.dimension) {
            v.fail(path + ".bounds", "expected one [lo, hi] pair per dimension");
            return std::nullopt;
        }
        for (std::size_t i = 0; i < b->size(); ++i) {
            const json& pair = (*b)[i];
            const std::string p = path + ".bounds[" + std::to_string(i) + "]";
            if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
                v.fail(p, "expected [lo, hi]");
                return std::nullopt;
            }
            const double lo = pair[0].get<double>(), hi = pair[1].get<double>();
            if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
                v.fail(p, "requires finite lo < hi");
                return std::nullopt;
            }
            grid.bounds.emplace_back(lo, hi);
        }
    } else {
        grid.bounds.assign(grid.dimension, {0.0, 1.0});
    }
    return grid;
}

std::optional<BetaSchedule> parse_schedule(Validator& v, const json& j, const std::string& path,
                                           std::size_t domain_size) {
    if (!v.object(j, path)) { return std::nullopt; }
    const auto setting = v.string(j, path, "setting", true);
    if (!setting) {
        v.only_keys(j, path, {"setting", "delta", "domain_size", "norm_bound", "noise_bound", "formula", "value"});
        return std::nullopt;
    }
    auto positive_delta = [](double x) { return x > 0.0 && x < 1.0; };
    auto nonneg = [](double x) { return x >= 0.0; };

    BetaSchedule s;
    if (*setting == "finite_bayesian") {
        v.only_keys(j, path, {"setting", "delta", "domain_size"});
        s.setting = BetaSetting::FiniteBayesian;
        const auto delta = v.number(j, path, "delta", true, positive_delta, "in (0, 1)");
        const auto size = v.integer(j, path, "domain_size", false, 1);
        if (!delta) { return std::nullopt; }
        s.delta = *delta;
        s.domain_size = size.value_or(domain_size);  // 0 = resolve from the pool later
        return s;
    }
    if (*setting == "rkhs_agnostic") {
        v.only_keys(j, path, {"setting", "delta", "norm_bound", "noise_bound", "formula"});
        s.setting = BetaSetting::RkhsAgnostic;
        const auto delta = v.number(j, path, "delta", true, positive_delta, "in (0, 1)");
        const auto b = v.number(j, path, "norm_bound", true, nonneg, ">= 0");
        const auto r = v.number(j, path, "noise_bound", true, nonneg, ">= 0");
        const auto formula = v.string(j, path, "formula", false);
        if (formula && *formula != "self_normalized" && *formula != "cubic") {
            v.fail(path + ".formula", "must be self_normalized or cubic");
            return std::nullopt;
        }
        if (!delta || !b || !r) { return std::nullopt; }
        s.delta = *delta;
        s.rkhs_norm_bound = *b;
        s.noise_bound = *r;
        s.rkhs_formula = formula.value_or("self_normalized") == "cubic" ? RkhsFormula::Cubic : RkhsFormula::SelfNormalized;
        return s;
    }
    if (*setting == "constant") {
        v.only_keys(j, path, {"setting", "value"});
        s.setting = BetaSetting::Constant;
        const auto value = v.number(j, path, "value", true, nonneg, ">= 0");
        if (!value) { return std::nullopt; }
        s.constant_value = *value;
        return s;
    }
    v.fail(path + ".setting", "must be one of finite_bayesian, rkhs_agnostic, constant");
    return std::nullopt;
}

std::optional<RuleConfig> parse_rule(Validator& v, const json& j, const std::string& path, std::size_t domain_size) {
    if (!v.object(j, path)) { return std::nullopt; }
    v.only_keys(j, path, {"kind", "label", "schedule", "xi"});
    const auto kind = v.string(j, path, "kind", true);
    const auto label = v.string(j, path, "label", false);
    if (label && (label->empty() || !std::all_of(label->begin(), label->end(), [](char c) {
                      return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
                  }))) {
        v.fail(path + ".label", "must be nonempty and use only letters, digits, '_' and '-'");
    }
    if (!kind) { return std::nullopt; }

    RuleConfig rc;
    if (*kind == "ucb") {
        v.reject(j, path, "xi", "only used by ei and pi");
        const json* sj = v.field(j, path, "schedule", true);
        if (sj == nullptr) { return std::nullopt; }
        const auto schedule = parse_schedule(v, *sj, path + ".schedule", domain_size);
        if (!schedule) { return std::nullopt; }
        rc.rule.kind = RuleKind::UCB;
        rc.rule.schedule = *schedule;
    } else if (*kind == "ei" || *kind == "pi") {
        v.reject(j, path, "schedule", "only used by ucb");
        const auto xi = v.number(j, path, "xi", false, [](double x) { return x >= 0; }, ">= 0");
        rc.rule.kind = *kind == "ei" ? RuleKind::ExpectedImprovement : RuleKind::ProbabilityOfImprovement;
        rc.rule.xi = xi.value_or(0.01);
    } else if (*kind == "max_variance" || *kind == "max_mean") {
        v.reject(j, path, "schedule", "only used by ucb");
        v.reject(j, path, "xi", "only used by ei and pi");
        rc.rule.kind = *kind == "max_variance" ? RuleKind::MaxVariance : RuleKind::MaxMean;
    } else {
        v.fail(path + ".kind", "must be one of ucb, ei, pi, max_variance, max_mean");
        return std::nullopt;
    }
    rc.label = label.value_or(*kind);
    return rc;
}

std::optional<RkhsConfig> parse_rkhs(Validator& v, const json& j) {
    const std::string path = "environment.rkhs";
    if (!v.object(j, path)) { return std::nullopt; }
    v.only_keys(j, path, {"centers", "norm_bound", "norm", "center_indices", "coefficients"});
    RkhsConfig rc;
    const auto bound = v.number(j, path, "norm_bound", true, [](double x) { return x >= 0; }, ">= 0");
    const auto norm = v.number(j, path, "norm", false, [](double x) { return x >= 0; }, ">= 0");
    const auto count = v.integer(j, path, "centers", false, 1);
    if (!bound) { return std::nullopt; }
    rc.norm_bound = *bound;
    rc.norm = norm.value_or(*bound);
    rc.centers = count.value_or(5);
    if (rc.norm > rc.norm_bound) { v.fail(path + ".norm", "must not exceed norm_bound"); }

    const json* idx = v.field(j, path, "center_indices", false);
    const json* coef = v.field(j, path, "coefficients", false);
    if ((idx == nullptr) != (coef == nullptr)) {
        v.fail(path, "center_indices and coefficients must be given together");
        return std::nullopt;
    }
    if (idx != nullptr) {
        v.reject(j, path, "centers", "conflicts with explicit center_indices");
        v.reject(j, path, "norm", "conflicts with explicit coefficients");
        if (!idx->is_array() || !coef->is_array() || idx->size() != coef->size() || idx->empty()) {
            v.fail(path, "center_indices and coefficients must be nonempty arrays of equal length");
            return std::nullopt;
        }
        std::vector<std::size_t> centers;
        std::vector<double> coefficients;
        for (std::size_t i = 0; i < idx->size(); ++i) {
            if (!(*idx)[i].is_number_unsigned()) {
                v.fail(path + ".center_indices[" + std::to_string(i) + "]", "expected a nonnegative integer");
                return std::nullopt;
            }
            if (!(*coef)[i].is_number() || !std::isfinite((*coef)[i].get<double>())) {
                v.fail(path + ".coefficients[" + std::to_string(i) + "]", "expected a finite number");
                return std::nullopt;
            }
            centers.push_back((*idx)[i].get<std::size_t>());
            coefficients.push_back((*coef)[i].get<double>());
        }
        rc.center_indices = std::move(centers);
        rc.coefficients = std::move(coefficients);
        rc.centers = rc.center_indices->size();
    }
    return rc;
}

}  // namespace

ConfigErrors::ConfigErrors(std::vector<std::string> messages)
    : ConfigError(join(messages, "\n")), messages_(std::move(messages)) {}

ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigErrors({std::string("<document>: ") + e.what()});
    }

    Validator v;
    ExperimentConfig config;
    if (!v.object(root, "<document>")) { throw ConfigErrors(v.errors); }
    v.only_keys(root, "", {"schema_version", "kernel", "domain", "environment", "model", "rules", "horizon", "run_seeds",
                           "output_dir", "workers"});

    if (const auto version = v.integer(root, "", "schema_version", true)) {
        if (*version != static_cast<std::uint64_t>(kSchemaVersion)) {
            v.fail("schema_version", "unsupported version " + std::to_string(*version) + " (expected " +
                                         std::to_string(kSchemaVersion) + ")");
        }
    }

    if (const json* k = v.field(root, "", "kernel", true)) {
        if (auto kernel = parse_kernel(v, *k)) { config.kernel = *kernel; }
    }

    std::size_t domain_size = 0;
    if (const json* d = v.field(root, "", "domain", true); d != nullptr && v.object(*d, "domain")) {
        v.only_keys(*d, "domain", {"grid", "dataset"});
        const bool has_grid = d->contains("grid");
        const bool has_dataset = d->contains("dataset");
        if (has_grid && has_dataset) {
            v.fail("domain", "domain.grid and domain.dataset are mutually exclusive; give exactly one");
        } else if (!has_grid && !has_dataset) {
            v.fail("domain", "one of domain.grid or domain.dataset is required");
        } else if (has_grid) {
            config.grid = parse_grid(v, d->at("grid"));
            if (config.grid) {
                domain_size = 1;
                for (std::size_t i = 0; i < config.grid->dimension; ++i) { domain_size *= config.grid->points_per_dim; }
            }
        } else if (const auto path = v.string(*d, "domain", "dataset", true)) {
            std::filesystem::path p(*path);
            config.dataset = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
        }
    }

    if (const json* e = v.field(root, "", "environment", true); e != nullptr && v.object(*e, "environment")) {
        v.only_keys(*e, "environment", {"variant", "noise_variance", "seeds", "rkhs"});
        if (const auto variant = v.string(*e, "environment", "variant", true)) {
            if (*variant == "sampled_gp") {
                config.variant = EnvironmentVariant::SampledGp;
            } else if (*variant == "rkhs") {
                config.variant = EnvironmentVariant::RkhsFunction;
            } else if (*variant == "tabular") {
                config.variant = EnvironmentVariant::Tabular;
            } else {
                v.fail("environment.variant", "must be one of sampled_gp, rkhs, tabular");
            }
            if (config.variant == EnvironmentVariant::Tabular && config.grid) {
                v.fail("environment.variant", "tabular environments need domain.dataset, not domain.grid");
            }
            if (config.variant != EnvironmentVariant::Tabular && config.dataset) {
                v.fail("environment.variant", *variant + " environments need domain.grid, not domain.dataset");
            }
            if (config.variant == EnvironmentVariant::RkhsFunction) {
                if (const json* r = v.field(*e, "environment", "rkhs", true)) { config.rkhs = parse_rkhs(v, *r); }
            } else {
                v.reject(*e, "environment", "rkhs", "only used by the rkhs variant");
            }
        }
        if (const auto noise = v.number(*e, "environment", "noise_variance", true, [](double x) { return x >= 0; }, ">= 0")) {
            config.env_noise_variance = *noise;
        }
        if (auto seeds = v.seeds(*e, "environment", "seeds")) { config.env_seeds = std::move(*seeds); }
    }

    if (const json* m = v.field(root, "", "model", true); m != nullptr && v.object(*m, "model")) {
        v.only_keys(*m, "model", {"noise_variance"});
        if (const auto noise = v.number(*m, "model", "noise_variance", true, [](double x) { return x > 0; }, "> 0")) {
            config.model_noise_variance = *noise;
        }
    }

    if (const json* r = v.field(root, "", "rules", true)) {
        if (!r->is_array() || r->empty()) {
            v.fail("rules", "expected a nonempty array of rules");
        } else {
            std::set<std::string> labels;
            for (std::size_t i = 0; i < r->size(); ++i) {
                const std::string path = "rules[" + std::to_string(i) + "]";
                if (auto rule = parse_rule(v, (*r)[i], path, domain_size)) {
                    if (!labels.insert(rule->label).second) {
                        v.fail(path + ".label", "duplicate rule label '" + rule->label + "'");
                    }
                    config.rules.push_back(std::move(*rule));
                }
            }
        }
    }

    if (const auto horizon = v.integer(root, "", "horizon", true, 1)) { config.horizon = *horizon; }
    if (auto seeds = v.seeds(root, "", "run_seeds")) { config.run_seeds = std::move(*seeds); }
    if (const auto out = v.string(root, "", "output_dir", false)) { config.output_dir = *out; }
    if (const auto workers = v.integer(root, "", "workers", false, 1)) { config.workers = *workers; }

    if (!v.errors.empty()) { throw ConfigErrors(std::move(v.errors)); }
    return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) { throw ConfigErrors({path.string() + ": cannot open config"}); }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), path.parent_path());
}

}  // namespace gpucb

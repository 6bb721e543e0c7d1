#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fgwc/approximation.hpp"
#include "fgwc/contractivity.hpp"
#include "fgwc/errors.hpp"
#include "fgwc/grid.hpp"
#include "fgwc/iteration.hpp"
#include "fgwc/piecewise_map.hpp"
#include "fgwc/psi.hpp"
#include "fgwc/real.hpp"
#include "fgwc/schedule.hpp"

namespace fgwc {

inline constexpr int kScenarioSchemaVersion = 1;

/// A declared check. `type` is one of: inequality, family,
/// common_fixed_points, weak_compatibility, psi_class, invariance.
struct CheckSpec {
    std::string name;
    std::string type;
    std::optional<InequalityKind> kind;
    std::map<std::string, std::string> roles;  // "T", "f", "g" -> map name
    std::vector<std::string> maps;             // family members / scanned maps
    std::optional<Domain> window;
    std::vector<std::pair<double, double>> probes;
    std::optional<GridSpec> grid;
    std::optional<double> tol;
    double residual_tol = 1e-9;
    double tmax = 100.0;
    std::size_t samples = 1001;
    std::optional<CompactSet> set;
};

struct IterationSpec {
    std::string name;
    Scheme scheme = Scheme::Picard;
    std::map<std::string, std::string> roles;
    std::optional<StepSchedule> alpha;
    std::optional<StepSchedule> beta;
    RunConfig config;
    bool diagnostics = false;
};

struct ApproxSpec {
    std::string name = "approx";
    std::map<std::string, std::string> roles;
    CompactSet set;
    double x0 = 0.0;
    bool strict_gap = false;
};

/// What a scenario expects of one named item. `expected` is
/// pass | fail (checks), points | whole_domain (fixed-point scans),
/// converged | max_iterations | solve_failed (iterations),
/// conclusion_holds | conclusion_fails (approx).
struct Expectation {
    std::string item;
    std::string expected;
    std::optional<Witness> witness;
    std::vector<double> points;
    std::optional<double> limit;
    std::optional<std::string> diagnostics;
    std::optional<std::vector<std::string>> failed_hypotheses;
    std::optional<std::size_t> max_iterations;
    double tol = 1e-12;
};

struct Scenario {
    int schema_version = kScenarioSchemaVersion;
    std::string name;
    std::string description;
    std::vector<std::string> notes;
    Domain domain;
    std::vector<PiecewiseMap> maps;
    PsiFunction psi = PsiFunction::power_ratio();
    GridSpec grid;
    double tol = 1e-12;
    std::vector<CheckSpec> checks;
    std::vector<IterationSpec> iterations;
    std::optional<ApproxSpec> approx;
    std::vector<Expectation> expectations;

    const PiecewiseMap& map(const std::string& map_name) const {
        for (const auto& m : maps) {
            if (m.name() == map_name) return m;
        }
        throw ParseError("scenario '" + name + "': unknown map '" + map_name + "'");
    }
};

namespace detail {

using nlohmann::json;

inline std::string where(const std::string& ctx, const std::string& key) { return ctx.empty() ? key : ctx + "." + key; }

inline double read_real(const json& j, const std::string& ctx) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return parse_real(j.get<std::string>());
    throw ParseError(ctx + ": expected a number or a rational string");
}

inline const json& require(const json& j, const char* key, const std::string& ctx) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(where(ctx, key) + ": missing");
    return j.at(key);
}

inline std::string read_string(const json& j, const char* key, const std::string& ctx) {
    const json& v = require(j, key, ctx);
    if (!v.is_string()) throw ParseError(where(ctx, key) + ": expected a string");
    return v.get<std::string>();
}

inline Interval read_interval(const json& j, const std::string& ctx) {
    try {
        if (j.is_array() && j.size() == 2) {
            return Interval::closed(read_real(j[0], ctx), read_real(j[1], ctx));
        }
        const double lo = read_real(require(j, "lo", ctx), where(ctx, "lo"));
        const double hi = read_real(require(j, "hi", ctx), where(ctx, "hi"));
        return {lo, hi, j.value("lo_closed", true), j.value("hi_closed", true)};
    } catch (const std::invalid_argument& e) {
        throw ParseError(ctx + ": " + e.what());
    }
}

inline Domain read_domain(const json& j, const std::string& ctx) {
    if (!j.is_array()) throw ParseError(ctx + ": expected a list of intervals");
    std::vector<Interval> ivs;
    for (std::size_t i = 0; i < j.size(); ++i) ivs.push_back(read_interval(j[i], ctx + "[" + std::to_string(i) + "]"));
    return Domain(std::move(ivs));
}

inline Branch read_branch(const json& j, const std::string& ctx) {
    const Interval sub = read_interval(require(j, "subdomain", ctx), where(ctx, "subdomain"));
    const std::string kind = read_string(j, "kind", ctx);
    auto num = [&](const char* key) { return read_real(require(j, key, ctx), where(ctx, key)); };
    try {
        if (kind == "affine") return {sub, Affine{num("slope"), num("intercept")}};
        if (kind == "constant") return {sub, Constant{num("value")}};
        if (kind == "linear_fractional") return {sub, LinearFractional{num("a"), num("b"), num("c"), num("d")}};
        if (kind == "power") return {sub, Power{num("coef"), num("exponent")}};
    } catch (const std::invalid_argument& e) {
        throw ParseError(ctx + ": " + e.what());
    }
    throw ParseError(where(ctx, "kind") + ": unknown branch kind '" + kind + "'");
}

inline PiecewiseMap read_map(const json& j, const std::string& ctx) {
    const std::string name = read_string(j, "name", ctx);
    const json& bs = require(j, "branches", ctx);
    if (!bs.is_array()) throw ParseError(where(ctx, "branches") + ": expected a list");
    std::vector<Branch> branches;
    for (std::size_t i = 0; i < bs.size(); ++i) {
        branches.push_back(read_branch(bs[i], where(ctx, "branches") + "[" + std::to_string(i) + "]"));
    }
    try {
        PiecewiseMap m(name, std::move(branches));
        if (j.contains("domain")) {
            const Domain declared = read_domain(j.at("domain"), where(ctx, "domain"));
            if (!(declared == m.domain())) {
                throw ParseError(ctx + ": branches of '" + name + "' cover " + m.domain().to_string() +
                                 ", not the declared " + declared.to_string());
            }
        }
        return m;
    } catch (const std::invalid_argument& e) {
        throw ParseError(ctx + ": " + e.what());
    }
}

inline PsiFunction read_psi(const json& j, const std::string& ctx) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "power_ratio") return PsiFunction::power_ratio();
        if (s == "half_linear") return PsiFunction::half_linear();
        throw ParseError(ctx + ": unknown psi family '" + s + "'");
    }
    const std::string family = read_string(j, "family", ctx);
    if (family == "power_ratio") return PsiFunction::power_ratio();
    if (family == "half_linear") return PsiFunction::half_linear();
    if (family == "custom") return PsiFunction::custom(read_string(j, "expression", ctx), j.value("label", ""));
    throw ParseError(where(ctx, "family") + ": unknown psi family '" + family + "'");
}

inline GridSpec read_grid(const json& j, const GridSpec& base, const std::string& ctx) {
    GridSpec g = base;
    if (j.contains("points_per_interval")) g.points_per_interval = j.at("points_per_interval").get<std::size_t>();
    if (j.contains("inset") && !j.at("inset").is_null()) g.inset = read_real(j.at("inset"), where(ctx, "inset"));
    if (j.contains("relative_inset")) g.relative_inset = read_real(j.at("relative_inset"), where(ctx, "relative_inset"));
    try {
        g.validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError(ctx + ": " + e.what());
    }
    return g;
}

inline std::map<std::string, std::string> read_roles(const json& j, const std::string& ctx) {
    std::map<std::string, std::string> roles;
    if (!j.is_object()) throw ParseError(ctx + ": expected an object of role -> map name");
    for (const auto& [role, name] : j.items()) {
        if (role != "T" && role != "f" && role != "g") throw ParseError(ctx + ": unknown role '" + role + "'");
        roles[role] = name.get<std::string>();
    }
    return roles;
}

inline StepSchedule read_schedule(const json& j, const std::string& ctx) {
    if (j.is_number() || j.is_string()) return StepSchedule::constant(read_real(j, ctx));
    const std::string kind = read_string(j, "kind", ctx);
    if (kind == "constant") return StepSchedule::constant(read_real(require(j, "alpha", ctx), where(ctx, "alpha")));
    if (kind == "harmonic") return StepSchedule::harmonic(read_real(require(j, "c", ctx), where(ctx, "c")));
    if (kind == "table") {
        std::vector<double> values;
        for (const auto& v : require(j, "values", ctx)) values.push_back(read_real(v, where(ctx, "values")));
        return StepSchedule::table(std::move(values), j.value("divergent_sum", false));
    }
    throw ParseError(where(ctx, "kind") + ": unknown schedule kind '" + kind + "'");
}

inline Scheme read_scheme(const std::string& s, const std::string& ctx) {
    if (s == "picard") return Scheme::Picard;
    if (s == "coincidence") return Scheme::Coincidence;
    if (s == "mann") return Scheme::Mann;
    if (s == "ishikawa") return Scheme::Ishikawa;
    throw ParseError(ctx + ": unknown scheme '" + s + "'");
}

inline Witness read_witness(const json& j, const std::string& ctx) {
    auto num = [&](const char* key) { return read_real(require(j, key, ctx), where(ctx, key)); };
    return Witness::at(num("x"), num("y"), num("lhs"), num("rhs"));
}

inline CheckSpec read_check(const json& j, const GridSpec& base_grid, const std::string& ctx) {
    CheckSpec c;
    c.name = read_string(j, "name", ctx);
    const std::string kind = read_string(j, "kind", ctx);
    try {
        if (kind == "common_fixed_points" || kind == "weak_compatibility" || kind == "psi_class" ||
            kind == "invariance") {
            c.type = kind;
        } else if (kind == "family_min") {
            c.type = "family";
            c.kind = InequalityKind::family_min();
        } else {
            c.type = "inequality";
            double k = 0.0;
            if (j.contains("k")) k = read_real(j.at("k"), where(ctx, "k"));
            c.kind = InequalityKind::from_name(kind, k);
        }
    } catch (const std::invalid_argument& e) {
        throw ParseError(where(ctx, "kind") + ": " + e.what());
    }
    if (j.contains("roles")) c.roles = read_roles(j.at("roles"), where(ctx, "roles"));
    if (j.contains("maps")) c.maps = j.at("maps").get<std::vector<std::string>>();
    if (j.contains("window")) c.window = read_domain(j.at("window"), where(ctx, "window"));
    if (j.contains("probes")) {
        for (const auto& p : j.at("probes")) {
            c.probes.emplace_back(read_real(require(p, "x", ctx), where(ctx, "probes.x")),
                                  read_real(require(p, "y", ctx), where(ctx, "probes.y")));
        }
    }
    if (j.contains("grid")) c.grid = read_grid(j.at("grid"), base_grid, where(ctx, "grid"));
    if (j.contains("tol")) c.tol = read_real(j.at("tol"), where(ctx, "tol"));
    if (j.contains("residual_tol")) c.residual_tol = read_real(j.at("residual_tol"), where(ctx, "residual_tol"));
    if (j.contains("tmax")) c.tmax = read_real(j.at("tmax"), where(ctx, "tmax"));
    if (j.contains("samples")) c.samples = j.at("samples").get<std::size_t>();
    if (j.contains("set")) {
        try {
            c.set = CompactSet(read_domain(j.at("set"), where(ctx, "set")));
        } catch (const std::invalid_argument& e) {
            throw ParseError(where(ctx, "set") + ": " + e.what());
        }
    }
    return c;
}

inline IterationSpec read_iteration(const json& j, const std::string& ctx) {
    IterationSpec it;
    it.name = read_string(j, "name", ctx);
    it.scheme = read_scheme(read_string(j, "scheme", ctx), where(ctx, "scheme"));
    it.roles = read_roles(require(j, "roles", ctx), where(ctx, "roles"));
    if (j.contains("alpha")) it.alpha = read_schedule(j.at("alpha"), where(ctx, "alpha"));
    if (j.contains("beta")) it.beta = read_schedule(j.at("beta"), where(ctx, "beta"));
    it.config.x0 = read_real(require(j, "x0", ctx), where(ctx, "x0"));
    if (j.contains("max_iter")) it.config.max_iter = j.at("max_iter").get<std::size_t>();
    if (j.contains("conv_tol")) it.config.conv_tol = read_real(j.at("conv_tol"), where(ctx, "conv_tol"));
    if (j.contains("solve_tol")) it.config.solve_tol = read_real(j.at("solve_tol"), where(ctx, "solve_tol"));
    if (j.contains("target") && !j.at("target").is_null()) {
        it.config.target = read_real(j.at("target"), where(ctx, "target"));
    }
    it.diagnostics = j.value("diagnostics", false);
    if ((it.scheme == Scheme::Mann || it.scheme == Scheme::Ishikawa) && !it.alpha) {
        throw ParseError(ctx + ": scheme needs an alpha schedule");
    }
    if (it.scheme == Scheme::Ishikawa && !it.beta) throw ParseError(ctx + ": ishikawa needs a beta schedule");
    return it;
}

inline Expectation read_expectation(const json& j, const std::string& ctx) {
    Expectation e;
    e.item = read_string(j, "item", ctx);
    e.expected = read_string(j, "expected", ctx);
    if (j.contains("witness")) e.witness = read_witness(j.at("witness"), where(ctx, "witness"));
    if (j.contains("points")) {
        for (const auto& p : j.at("points")) e.points.push_back(read_real(p, where(ctx, "points")));
    }
    if (j.contains("limit")) e.limit = read_real(j.at("limit"), where(ctx, "limit"));
    if (j.contains("diagnostics")) e.diagnostics = j.at("diagnostics").get<std::string>();
    if (j.contains("failed_hypotheses")) {
        e.failed_hypotheses = j.at("failed_hypotheses").get<std::vector<std::string>>();
    }
    if (j.contains("max_iterations")) e.max_iterations = j.at("max_iterations").get<std::size_t>();
    if (j.contains("tol")) e.tol = read_real(j.at("tol"), where(ctx, "tol"));
    return e;
}

}  // namespace detail

/// Builds and validates a scenario from its JSON form.
inline Scenario scenario_from_json(const nlohmann::json& j) {
    using detail::require;
    Scenario s;
    if (!j.is_object()) throw ParseError("scenario: expected an object");
    s.schema_version = require(j, "schema_version", "").get<int>();
    if (s.schema_version != kScenarioSchemaVersion) {
        throw ParseError("unsupported schema_version " + std::to_string(s.schema_version));
    }
    s.name = detail::read_string(j, "name", "");
    s.description = j.value("description", "");
    if (j.contains("notes")) s.notes = j.at("notes").get<std::vector<std::string>>();
    if (j.contains("domain")) s.domain = detail::read_domain(j.at("domain"), "domain");
    if (j.contains("maps")) {
        const auto& ms = j.at("maps");
        for (std::size_t i = 0; i < ms.size(); ++i) s.maps.push_back(detail::read_map(ms[i], "maps[" + std::to_string(i) + "]"));
    }
    if (j.contains("psi")) s.psi = detail::read_psi(j.at("psi"), "psi");
    if (j.contains("grid")) s.grid = detail::read_grid(j.at("grid"), GridSpec{}, "grid");
    if (j.contains("tol")) s.tol = detail::read_real(j.at("tol"), "tol");
    if (j.contains("checks")) {
        const auto& cs = j.at("checks");
        for (std::size_t i = 0; i < cs.size(); ++i) {
            s.checks.push_back(detail::read_check(cs[i], s.grid, "checks[" + std::to_string(i) + "]"));
        }
    }
    if (j.contains("iterations")) {
        const auto& is = j.at("iterations");
        for (std::size_t i = 0; i < is.size(); ++i) {
            s.iterations.push_back(detail::read_iteration(is[i], "iterations[" + std::to_string(i) + "]"));
        }
    }
    if (j.contains("approx") && !j.at("approx").is_null()) {
        const auto& a = j.at("approx");
        ApproxSpec ap;
        ap.name = a.value("name", "approx");
        ap.roles = detail::read_roles(require(a, "roles", "approx"), "approx.roles");
        try {
            ap.set = CompactSet(detail::read_domain(require(a, "set", "approx"), "approx.set"));
        } catch (const std::invalid_argument& e) {
            throw ParseError(std::string("approx.set: ") + e.what());
        }
        ap.x0 = detail::read_real(require(a, "x0", "approx"), "approx.x0");
        ap.strict_gap = a.value("strict_gap", false);
        s.approx = std::move(ap);
    }
    if (j.contains("expectations")) {
        const auto& es = j.at("expectations");
        for (std::size_t i = 0; i < es.size(); ++i) {
            s.expectations.push_back(detail::read_expectation(es[i], "expectations[" + std::to_string(i) + "]"));
        }
    }

    // Cross-references.
    std::set<std::string> map_names;
    for (const auto& m : s.maps) {
        if (!map_names.insert(m.name()).second) throw ParseError("duplicate map name '" + m.name() + "'");
        if (!(m.domain() == s.domain)) {
            throw ParseError("map '" + m.name() + "' covers " + m.domain().to_string() + " but the scenario domain is " +
                             s.domain.to_string());
        }
    }
    auto need_map = [&](const std::string& name, const std::string& ctx) {
        if (!map_names.count(name)) throw ParseError(ctx + ": unknown map '" + name + "'");
    };
    std::set<std::string> items;
    for (const auto& c : s.checks) {
        if (!items.insert(c.name).second) throw ParseError("duplicate item name '" + c.name + "'");
        for (const auto& [role, name] : c.roles) need_map(name, "check '" + c.name + "'");
        for (const auto& name : c.maps) need_map(name, "check '" + c.name + "'");
    }
    for (const auto& it : s.iterations) {
        if (!items.insert(it.name).second) throw ParseError("duplicate item name '" + it.name + "'");
        for (const auto& [role, name] : it.roles) need_map(name, "iteration '" + it.name + "'");
    }
    if (s.approx) {
        if (!items.insert(s.approx->name).second) throw ParseError("duplicate item name '" + s.approx->name + "'");
        for (const auto& [role, name] : s.approx->roles) need_map(name, "approx");
    }
    for (const auto& e : s.expectations) {
        if (!items.count(e.item)) throw ParseError("expectation references undeclared item '" + e.item + "'");
    }
    return s;
}

inline Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open scenario file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("'" + path + "': " + e.what());
    }
    try {
        return scenario_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("'" + path + "': " + e.what());
    }
}

}  // namespace fgwc

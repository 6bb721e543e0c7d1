#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fgwc/approximation.hpp"
#include "fgwc/contractivity.hpp"
#include "fgwc/iteration.hpp"
#include "fgwc/psi.hpp"
#include "fgwc/scenario.hpp"
#include "fgwc/trace_io.hpp"

namespace fgwc {

/// Command-line overrides applied on top of a scenario.
struct RunOptions {
    std::optional<std::size_t> grid_n;
    std::optional<double> inset;
    std::optional<double> tol;
    std::optional<std::size_t> max_iter;
    bool run_checks = true;
    bool run_iterations = true;
    bool run_approx = true;
};

struct TraceFile {
    std::string filename;
    std::string csv;
};

struct RunResult {
    nlohmann::ordered_json report;
    std::vector<TraceFile> traces;
    int exit_status = 0;
};

namespace detail {

using ojson = nlohmann::ordered_json;

inline ojson to_json(const Interval& iv) {
    return {{"lo", iv.lo()}, {"hi", iv.hi()}, {"lo_closed", iv.lo_closed()}, {"hi_closed", iv.hi_closed()}};
}

inline ojson to_json(const Domain& d) {
    ojson out = ojson::array();
    for (const auto& iv : d.intervals()) out.push_back(to_json(iv));
    return out;
}

inline ojson to_json(const GridSpec& g) {
    ojson out{{"points_per_interval", g.points_per_interval}};
    if (g.inset) {
        out["inset"] = *g.inset;
    } else {
        out["relative_inset"] = g.relative_inset;
    }
    return out;
}

inline ojson to_json(const Witness& w) {
    return {{"x", w.x}, {"y", w.y}, {"lhs", w.lhs}, {"rhs", w.rhs}, {"margin", w.margin}};
}

inline ojson to_json(const PsiFunction& p) {
    ojson out{{"family", p.family_name()}, {"label", p.label()}};
    if (p.family() == PsiFunction::Family::Custom) out["expression"] = p.expression();
    return out;
}

inline ojson to_json(const CheckReport& r) {
    ojson out{{"kind", r.check}, {"passed", r.passed}};
    out["witness"] = r.witness ? to_json(*r.witness) : ojson(nullptr);
    if (!r.violated.empty()) out["violated"] = r.violated;
    out["pairs_checked"] = r.pairs_checked;
    out["violations"] = r.violations;
    out["max_margin"] = r.max_margin;
    out["grid"] = r.grid ? to_json(*r.grid) : ojson(nullptr);
    out["tol"] = r.tol;
    if (!r.probes.empty()) {
        ojson probes = ojson::array();
        for (const auto& p : r.probes) probes.push_back(to_json(p));
        out["probes"] = probes;
    }
    if (!r.notes.empty()) out["notes"] = r.notes;
    return out;
}

inline ojson to_json(const RunConfig& c) {
    ojson out{{"x0", c.x0}, {"max_iter", c.max_iter}, {"conv_tol", c.conv_tol}, {"solve_tol", c.solve_tol}};
    out["target"] = c.target ? ojson(*c.target) : ojson(nullptr);
    return out;
}

inline ojson to_json(const DiagnosticReport& d) {
    ojson out{{"passed", d.passed}, {"inequality", d.inequality}, {"checked", d.checked}};
    if (d.first_violation) {
        out["first_violation"] = *d.first_violation;
        out["lhs"] = d.lhs;
        out["rhs"] = d.rhs;
    }
    return out;
}

inline ojson to_json(const std::map<std::string, std::string>& roles) {
    ojson out = ojson::object();
    for (const char* role : {"T", "f", "g"}) {
        if (auto it = roles.find(role); it != roles.end()) out[role] = it->second;
    }
    return out;
}

/// Outcome of one item, kept for expectation matching.
struct ItemOutcome {
    std::string name;
    std::string type;  // check type, "iteration" or "approx"
    std::optional<std::string> error;
    std::optional<CheckReport> check;
    std::optional<FixedPointScan> fixed_points;
    std::optional<IterationTrace> trace;
    std::optional<DiagnosticReport> diagnostics;
    std::optional<InvariantApproxReport> approx;
    const CheckSpec* check_spec = nullptr;
};

inline const PiecewiseMap& role(const Scenario& s, const std::map<std::string, std::string>& roles, const char* r,
                                const std::string& item) {
    auto it = roles.find(r);
    if (it == roles.end()) throw ParseError("item '" + item + "' needs role " + r);
    return s.map(it->second);
}

inline std::optional<PiecewiseMap> optional_role(const Scenario& s, const std::map<std::string, std::string>& roles,
                                                 const char* r) {
    auto it = roles.find(r);
    if (it == roles.end()) return std::nullopt;
    return s.map(it->second);
}

inline MapBundle bundle_for(const Scenario& s, const CheckSpec& c) {
    if (c.type == "family") {
        if (c.maps.empty()) throw ParseError("check '" + c.name + "' needs a non-empty family in 'maps'");
        std::vector<PiecewiseMap> family;
        for (const auto& name : c.maps) family.push_back(s.map(name));
        return MapBundle{family.front(), role(s, c.roles, "f", c.name), role(s, c.roles, "g", c.name), family};
    }
    return MapBundle{role(s, c.roles, "T", c.name), optional_role(s, c.roles, "f"), optional_role(s, c.roles, "g"), {}};
}

inline GridSpec effective_grid(const Scenario& s, const CheckSpec* c, const RunOptions& o) {
    GridSpec g = c && c->grid ? *c->grid : s.grid;
    if (o.grid_n) g.points_per_interval = *o.grid_n;
    if (o.inset) g.inset = *o.inset;
    g.validate();
    return g;
}

inline std::vector<PiecewiseMap> named_maps(const Scenario& s, const CheckSpec& c) {
    std::vector<PiecewiseMap> out;
    for (const auto& name : c.maps) out.push_back(s.map(name));
    if (out.empty()) throw ParseError("check '" + c.name + "' needs 'maps'");
    return out;
}

inline ojson run_check(const Scenario& s, const CheckSpec& c, const RunOptions& o, ItemOutcome& outcome) {
    ojson out{{"name", c.name}};
    const GridSpec grid = effective_grid(s, &c, o);
    const double tol = o.tol.value_or(c.tol.value_or(s.tol));
    outcome.check_spec = &c;
    if (c.type == "inequality" || c.type == "family") {
        CheckOptions opts{grid, tol, c.window, c.probes};
        const MapBundle bundle = bundle_for(s, c);
        outcome.check = check_inequality(*c.kind, bundle, s.psi, opts);
        if (c.kind->tag() == InequalityKind::Tag::Contraction) out["k"] = c.kind->k();
        out["maps"] = c.type == "family" ? ojson(c.maps) : to_json(c.roles);
        out.update(to_json(*outcome.check));
    } else if (c.type == "common_fixed_points") {
        outcome.fixed_points = find_common_fixed_points(named_maps(s, c), grid, c.residual_tol);
        const auto& fp = *outcome.fixed_points;
        out["kind"] = "common_fixed_points";
        out["maps"] = c.maps;
        out["whole_domain"] = fp.whole_domain;
        out["points"] = fp.whole_domain ? ojson::array() : ojson(fp.points);
        out["grid_size"] = fp.grid_size;
        out["grid"] = to_json(grid);
        out["residual_tol"] = c.residual_tol;
    } else if (c.type == "weak_compatibility") {
        const auto maps = named_maps(s, c);
        if (maps.size() != 2) throw ParseError("check '" + c.name + "' needs exactly two maps");
        const auto wc = check_weak_compatibility(maps[0], maps[1], grid, tol);
        outcome.check = wc.check;
        out["maps"] = c.maps;
        out.update(to_json(wc.check));
        out["coincidence_points"] = wc.coincidence_points;
        out["out_of_domain"] = wc.out_of_domain;
    } else if (c.type == "psi_class") {
        outcome.check = check_psi_class(s.psi, c.tmax, c.samples);
        out["psi"] = to_json(s.psi);
        out.update(to_json(*outcome.check));
    } else if (c.type == "invariance") {
        if (!c.set) throw ParseError("check '" + c.name + "' needs a 'set'");
        outcome.check = check_invariance(role(s, c.roles, "T", c.name), *c.set, grid, tol);
        out["maps"] = to_json(c.roles);
        out["set"] = to_json(c.set->domain());
        out.update(to_json(*outcome.check));
    }
    return out;
}

inline ojson run_iteration(const Scenario& s, const IterationSpec& it, const RunOptions& o, ItemOutcome& outcome,
                           std::vector<TraceFile>& traces) {
    RunConfig cfg = it.config;
    if (o.max_iter) cfg.max_iter = *o.max_iter;
    const PiecewiseMap& t = role(s, it.roles, "T", it.name);
    IterationTrace tr;
    switch (it.scheme) {
        case Scheme::Picard: tr = picard_iterate(t, cfg); break;
        case Scheme::Coincidence:
            tr = coincidence_iterate(t, role(s, it.roles, "f", it.name), role(s, it.roles, "g", it.name), cfg);
            break;
        case Scheme::Mann:
            tr = mann_iterate(t, role(s, it.roles, "f", it.name), role(s, it.roles, "g", it.name), *it.alpha, cfg);
            break;
        case Scheme::Ishikawa:
            tr = ishikawa_iterate(t, role(s, it.roles, "f", it.name), role(s, it.roles, "g", it.name), *it.alpha,
                                  *it.beta, cfg);
            break;
    }

    ojson out{{"name", it.name}, {"scheme", scheme_name(it.scheme)}, {"maps", to_json(it.roles)}};
    if (it.alpha) out["alpha"] = it.alpha->describe();
    if (it.beta) out["beta"] = it.beta->describe();
    out["config"] = to_json(cfg);
    out["status"] = status_name(tr.status);
    out["limit"] = tr.limit ? ojson(*tr.limit) : ojson(nullptr);
    out["iterations"] = tr.iterations;
    const auto res = tr.residuals();
    out["final_residual"] = res.empty() ? ojson(nullptr) : ojson(res.back());
    if (tr.failure) {
        out["failure"] = {{"iter", tr.failure->iter}, {"stage", tr.failure->stage}, {"message", tr.failure->message}};
    }
    out["warnings"] = tr.warnings;
    if (it.diagnostics) {
        if (tr.rows.size() >= 3) {
            outcome.diagnostics = monotonicity_diagnostics(tr, s.psi);
            out["diagnostics"] = to_json(*outcome.diagnostics);
        } else {
            out["diagnostics"] = {{"passed", nullptr}, {"note", "fewer than two residuals"}};
        }
    }
    std::string file = s.name + "." + it.name + ".csv";
    std::replace_if(file.begin(), file.end(), [](char ch) { return ch == '/' || ch == '\\'; }, '_');
    out["trace_file"] = file;
    traces.push_back({file, trace_csv(tr)});
    outcome.trace = std::move(tr);
    return out;
}

inline ojson run_approx(const Scenario& s, const ApproxSpec& a, const RunOptions& o, ItemOutcome& outcome) {
    const GridSpec grid = effective_grid(s, nullptr, o);
    const PiecewiseMap& t = role(s, a.roles, "T", a.name);
    const PiecewiseMap& f = role(s, a.roles, "f", a.name);
    const PiecewiseMap& g = role(s, a.roles, "g", a.name);
    outcome.approx = verify_invariant_approximation(t, f, g, a.set, a.x0, s.psi, grid);
    const auto& rep = *outcome.approx;

    ojson out{{"name", a.name}, {"maps", to_json(a.roles)}, {"set", to_json(a.set.domain())}, {"x0", a.x0}};
    out["best_approximation"] = {{"points", rep.best.points}, {"dist", rep.best.dist}};
    ojson hyps = ojson::array();
    for (const auto& h : rep.hypotheses) {
        ojson e{{"name", h.name}, {"passed", h.passed}};
        e["witness"] = h.witness ? to_json(*h.witness) : ojson(nullptr);
        if (!h.detail.empty()) e["detail"] = h.detail;
        hyps.push_back(e);
    }
    out["hypotheses"] = hyps;
    out["all_hypotheses_hold"] = rep.all_hypotheses_hold();
    out["conclusion"] = {{"exists_z", rep.conclusion_holds},
                         {"z", rep.z ? ojson(*rep.z) : ojson(nullptr)},
                         {"residual", rep.residual}};
    if (a.strict_gap) {
        const auto gap = check_strict_gap(t, f, g, rep.best, grid);
        ojson gj = to_json(gap.check);
        gj["first_violation_x"] = gap.first_violation_x ? ojson(*gap.first_violation_x) : ojson(nullptr);
        gj["last_violation_x"] = gap.last_violation_x ? ojson(*gap.last_violation_x) : ojson(nullptr);
        out["strict_gap"] = gj;
    }
    return out;
}

inline bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

/// Returns an empty string when met, otherwise the reason.
inline std::string evaluate_expectation(const Scenario& s, const Expectation& e, const ItemOutcome& o) {
    if (o.error) return "item raised an error: " + *o.error;
    const std::string& want = e.expected;

    if (o.fixed_points) {
        const auto& fp = *o.fixed_points;
        if (want == "whole_domain") return fp.whole_domain ? "" : "scan did not cover the whole domain";
        if (want != "points") return "expected must be points or whole_domain for a fixed-point scan";
        if (fp.whole_domain) return "scan reported the whole domain";
        if (fp.points.size() != e.points.size()) {
            return "found " + std::to_string(fp.points.size()) + " points, expected " + std::to_string(e.points.size());
        }
        for (std::size_t i = 0; i < e.points.size(); ++i) {
            if (!close(fp.points[i], e.points[i], e.tol)) {
                return "point " + format_real(fp.points[i]) + " differs from " + format_real(e.points[i]);
            }
        }
        return "";
    }

    if (o.check) {
        const auto& r = *o.check;
        if (want != "pass" && want != "fail") return "expected must be pass or fail for a check";
        if ((want == "pass") != r.passed) return std::string("check ") + (r.passed ? "passed" : "failed");
        if (!e.witness) return "";
        const Witness& w = *e.witness;
        Witness actual;
        const CheckSpec* c = o.check_spec;
        if (c && (c->type == "inequality" || c->type == "family")) {
            actual = evaluate_pair(*c->kind, bundle_for(s, *c), s.psi, w.x, w.y);
        } else if (r.witness) {
            actual = *r.witness;
            if (!close(actual.x, w.x, e.tol) || !close(actual.y, w.y, e.tol)) {
                return "reported witness is at (" + format_real(actual.x) + ", " + format_real(actual.y) + ")";
            }
        } else {
            return "no witness reported";
        }
        if (!(actual.lhs > actual.rhs + r.tol)) {
            return "pair (" + format_real(w.x) + ", " + format_real(w.y) + ") does not violate the inequality";
        }
        if (!close(actual.lhs, w.lhs, e.tol) || !close(actual.rhs, w.rhs, e.tol)) {
            return "witness evaluates to lhs " + format_real(actual.lhs) + ", rhs " + format_real(actual.rhs);
        }
        return "";
    }

    if (o.trace) {
        const auto& tr = *o.trace;
        if (want != status_name(tr.status)) return "status is " + status_name(tr.status);
        if (e.limit && !(tr.limit && close(*tr.limit, *e.limit, e.tol))) {
            return "limit is " + (tr.limit ? format_real(*tr.limit) : std::string("absent"));
        }
        if (e.max_iterations && tr.iterations > *e.max_iterations) {
            return "took " + std::to_string(tr.iterations) + " iterations";
        }
        if (e.diagnostics) {
            if (!o.diagnostics) return "diagnostics were not run";
            if ((*e.diagnostics == "pass") != o.diagnostics->passed) {
                return std::string("diagnostics ") + (o.diagnostics->passed ? "passed" : "failed");
            }
        }
        return "";
    }

    if (o.approx) {
        const auto& a = *o.approx;
        if (want != "conclusion_holds" && want != "conclusion_fails") {
            return "expected must be conclusion_holds or conclusion_fails";
        }
        if ((want == "conclusion_holds") != a.conclusion_holds) {
            return std::string("conclusion ") + (a.conclusion_holds ? "holds" : "fails");
        }
        if (e.failed_hypotheses && *e.failed_hypotheses != a.failed_hypotheses()) {
            std::string got;
            for (const auto& h : a.failed_hypotheses()) got += (got.empty() ? "" : ", ") + h;
            return "failed hypotheses are [" + got + "]";
        }
        return "";
    }
    return "item was not run";
}

}  // namespace detail

/// Runs every selected item of the scenario in declaration order and
/// assembles a deterministic report. Exit status 0 iff no item raised an
/// error and every expectation on a run item is met.
inline RunResult run_scenario(const Scenario& s, const RunOptions& opts = {}) {
    using detail::ojson;
    RunResult result;
    ojson& rep = result.report;
    rep["scenario"] = s.name;
    rep["schema_version"] = s.schema_version;
    if (!s.description.empty()) rep["description"] = s.description;
    if (!s.notes.empty()) rep["notes"] = s.notes;
    rep["domain"] = detail::to_json(s.domain);
    rep["psi"] = detail::to_json(s.psi);

    std::vector<detail::ItemOutcome> outcomes;
    std::vector<std::string> errors;
    auto guarded = [&](const std::string& name, const std::string& type, auto&& body) {
        detail::ItemOutcome o{name, type};
        ojson entry;
        try {
            entry = body(o);
        } catch (const std::exception& ex) {
            o.error = ex.what();
            errors.push_back(name + ": " + ex.what());
            entry = ojson{{"name", name}, {"error", ex.what()}};
        }
        outcomes.push_back(std::move(o));
        return entry;
    };

    ojson checks = ojson::array();
    if (opts.run_checks) {
        for (const auto& c : s.checks) {
            checks.push_back(guarded(c.name, c.type, [&](auto& o) { return detail::run_check(s, c, opts, o); }));
        }
    }
    rep["checks"] = checks;

    ojson iterations = ojson::array();
    if (opts.run_iterations) {
        for (const auto& it : s.iterations) {
            iterations.push_back(guarded(it.name, "iteration", [&](auto& o) {
                return detail::run_iteration(s, it, opts, o, result.traces);
            }));
        }
    }
    rep["iterations"] = iterations;

    rep["approx"] = nullptr;
    if (opts.run_approx && s.approx) {
        rep["approx"] = guarded(s.approx->name, "approx", [&](auto& o) { return detail::run_approx(s, *s.approx, opts, o); });
    }

    ojson expectations = ojson::array();
    std::optional<std::string> first_unmet;
    for (const auto& e : s.expectations) {
        auto it = std::find_if(outcomes.begin(), outcomes.end(), [&](const auto& o) { return o.name == e.item; });
        if (it == outcomes.end()) continue;  // item not selected in this run
        const std::string reason = detail::evaluate_expectation(s, e, *it);
        ojson entry{{"item", e.item}, {"expected", e.expected}, {"met", reason.empty()}};
        if (!reason.empty()) {
            entry["reason"] = reason;
            if (!first_unmet) first_unmet = e.item + " (expected " + e.expected + "): " + reason;
        }
        expectations.push_back(entry);
    }
    rep["expectations"] = expectations;

    const bool ok = errors.empty() && !first_unmet;
    ojson diag{{"status", ok ? "ok" : "failed"}};
    diag["first_unmet"] = first_unmet ? ojson(*first_unmet) : ojson(nullptr);
    diag["errors"] = errors;
    rep["diagnostics"] = diag;
    result.exit_status = ok ? 0 : 1;
    return result;
}

/// Scenario names (file stems) of the *.json files in `dir`, sorted.
inline std::vector<std::string> list_builtins(const std::filesystem::path& dir) {
    std::vector<std::string> names;
    if (!std::filesystem::is_directory(dir)) return names;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") names.push_back(entry.path().stem().string());
    }
    std::sort(names.begin(), names.end());
    return names;
}

/// Serialized report text, two-space indented with a trailing newline.
inline std::string report_text(const RunResult& r) { return r.report.dump(2) + "\n"; }

}  // namespace fgwc

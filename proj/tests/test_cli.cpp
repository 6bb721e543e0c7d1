#include <algorithm>
#include <fstream>
#include <set>

#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace fgwc;
using nlohmann::json;

namespace {

json minimal() {
    return json::parse(R"({
      "schema_version": 1,
      "name": "mini",
      "domain": [[0, 1]],
      "maps": [
        {"name": "T", "branches": [{"subdomain": [0, 1], "kind": "affine", "slope": "1/2", "intercept": 0}]},
        {"name": "id", "branches": [{"subdomain": [0, 1], "kind": "affine", "slope": 1, "intercept": 0}]}
      ],
      "psi": "half_linear",
      "checks": [{"name": "wc", "kind": "weakly_contractive", "roles": {"T": "T"}}],
      "iterations": [{"name": "p", "scheme": "picard", "roles": {"T": "T"}, "x0": 1}],
      "expectations": [{"item": "wc", "expected": "pass"}, {"item": "p", "expected": "converged", "limit": 0, "tol": 1e-7}]
    })");
}

std::string parse_error(const json& j) {
    try {
        (void)scenario_from_json(j);
    } catch (const ParseError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST(Scenario, ParsesMinimal) {
    const auto s = scenario_from_json(minimal());
    EXPECT_EQ(s.name, "mini");
    EXPECT_EQ(s.maps.size(), 2u);
    EXPECT_DOUBLE_EQ(s.map("T")(0.5), 0.25);
    const auto r = run_scenario(s);
    EXPECT_EQ(r.exit_status, 0) << report_text(r);
    ASSERT_EQ(r.traces.size(), 1u);
    EXPECT_EQ(r.traces[0].filename, "mini.p.csv");
}

TEST(Scenario, RejectsBadInput) {
    auto j = minimal();
    j["schema_version"] = 2;
    EXPECT_NE(parse_error(j).find("schema_version"), std::string::npos);

    j = minimal();
    j["checks"][0]["roles"]["T"] = "missing";
    EXPECT_NE(parse_error(j).find("unknown map 'missing'"), std::string::npos);

    j = minimal();
    j["expectations"][0]["item"] = "nothing";
    EXPECT_NE(parse_error(j).find("undeclared item"), std::string::npos);

    j = minimal();
    j["maps"][1]["branches"][0]["subdomain"] = json::array({0, 2});
    EXPECT_NE(parse_error(j).find("scenario domain"), std::string::npos);

    j = minimal();
    j["maps"][0]["branches"][0]["slope"] = "1/0";
    EXPECT_FALSE(parse_error(j).empty());

    j = minimal();
    j["checks"][0]["kind"] = "nonsense";
    EXPECT_FALSE(parse_error(j).empty());

    j = minimal();
    j["maps"][1]["name"] = "T";
    EXPECT_NE(parse_error(j).find("duplicate map"), std::string::npos);
}

TEST(Runner, UnmetExpectationNamesFirstItem) {
    auto j = minimal();
    j["expectations"][0]["expected"] = "fail";
    const auto r = run_scenario(scenario_from_json(j));
    EXPECT_EQ(r.exit_status, 1);
    const auto& diag = r.report["diagnostics"];
    EXPECT_EQ(diag["status"], "failed");
    EXPECT_NE(diag["first_unmet"].get<std::string>().find("wc"), std::string::npos);
}

TEST(Runner, WrongWitnessIsUnmet) {
    const auto s = load_scenario(fixtures::scenario_path("example-2.5"));
    auto raw = json::parse(std::ifstream(fixtures::scenario_path("example-2.5")));
    for (auto& e : raw["expectations"]) {
        if (e["item"] == "fg_min") e["witness"]["lhs"] = "1/6";
    }
    const auto r = run_scenario(scenario_from_json(raw));
    EXPECT_EQ(r.exit_status, 1);
    EXPECT_EQ(run_scenario(s).exit_status, 0);
}

TEST(Runner, ItemErrorsAreReported) {
    auto j = minimal();
    j["iterations"][0]["x0"] = 5;
    const auto r = run_scenario(scenario_from_json(j));
    EXPECT_EQ(r.exit_status, 1);
    EXPECT_EQ(r.report["diagnostics"]["errors"].size(), 1u);
    EXPECT_TRUE(r.report["iterations"][0].contains("error"));
}

TEST(Runner, EmptyScenario) {
    const auto r = run_scenario(load_scenario(fixtures::scenario_path("empty")));
    EXPECT_EQ(r.exit_status, 0);
    EXPECT_TRUE(r.report["checks"].empty());
    EXPECT_TRUE(r.report["iterations"].empty());
    EXPECT_TRUE(r.report["approx"].is_null());
    EXPECT_TRUE(r.traces.empty());
}

TEST(Runner, OverridesApply) {
    RunOptions opts;
    opts.grid_n = 11;
    opts.max_iter = 3;
    const auto r = run_scenario(scenario_from_json(minimal()), opts);
    EXPECT_EQ(r.report["checks"][0]["pairs_checked"], 121);
    EXPECT_EQ(r.report["iterations"][0]["status"], "max_iterations");
    EXPECT_EQ(r.exit_status, 1);
}

TEST(Builtins, ListContainsRequiredNames) {
    const auto names = list_builtins(FGWC_SCENARIO_DIR);
    for (const auto* n : {"example-1.3", "example-1.9", "example-1.10", "example-2.3", "example-2.5", "mann-linear",
                          "ishikawa-linear"}) {
        EXPECT_NE(std::find(names.begin(), names.end(), n), names.end()) << n;
    }
    EXPECT_EQ(std::set<std::string>(names.begin(), names.end()).size(), names.size());
}

TEST(Builtins, AllPassAndAreDeterministic) {
    for (const auto& name : list_builtins(FGWC_SCENARIO_DIR)) {
        const auto s = load_scenario(fixtures::scenario_path(name));
        EXPECT_EQ(s.name, name);
        const auto a = run_scenario(s);
        const auto b = run_scenario(load_scenario(fixtures::scenario_path(name)));
        EXPECT_EQ(a.exit_status, 0) << name << ": " << a.report["diagnostics"].dump();
        EXPECT_EQ(report_text(a), report_text(b)) << name;
        ASSERT_EQ(a.traces.size(), b.traces.size());
        for (std::size_t i = 0; i < a.traces.size(); ++i) EXPECT_EQ(a.traces[i].csv, b.traces[i].csv);
    }
}

TEST(Builtins, MapsMatchIndependentTranscription) {
    struct Case {
        const char* scenario;
        fixtures::Triple maps;
    };
    for (const auto& c : {Case{"example-1.9", fixtures::quarter_maps()}, Case{"example-2.3", fixtures::quarter_maps()},
                          Case{"example-1.10", fixtures::unit_maps()}, Case{"example-2.5", fixtures::max_form_maps()}}) {
        const auto s = load_scenario(fixtures::scenario_path(c.scenario));
        const std::vector<std::pair<const PiecewiseMap*, const PiecewiseMap*>> pairs{
            {&s.map("T"), &c.maps.t}, {&s.map("f"), &c.maps.f}, {&s.map("g"), &c.maps.g}};
        for (const auto& [loaded, expected] : pairs) {
            EXPECT_EQ(loaded->domain(), expected->domain()) << c.scenario;
            for (double x : scan_grid(expected->domain(), {401}, {loaded, expected})) {
                EXPECT_EQ((*loaded)(x), (*expected)(x)) << c.scenario << " " << loaded->name() << " at " << x;
            }
        }
    }
}

TEST(Builtins, FgMinPassImpliesFgMaxPass) {
    for (const auto& name : list_builtins(FGWC_SCENARIO_DIR)) {
        const auto s = load_scenario(fixtures::scenario_path(name));
        auto has = [&](const char* m) {
            return std::any_of(s.maps.begin(), s.maps.end(), [&](const auto& x) { return x.name() == m; });
        };
        if (!has("T") || !has("f") || !has("g")) continue;
        const MapBundle maps{s.map("T"), s.map("f"), s.map("g"), {}};
        const bool min_pass = check_inequality(InequalityKind::fg_min(), maps, s.psi).passed;
        const bool max_pass = check_inequality(InequalityKind::fg_max(), maps, s.psi).passed;
        EXPECT_TRUE(!min_pass || max_pass) << name;
    }
}

#include <doctest.h>

#include <algorithm>
#include <set>

#include <json.hpp>

#include "subaudit/error.hpp"
#include "subaudit/fuzzy/config_io.hpp"
#include "subaudit/fuzzy/rule_parser.hpp"
#include "subaudit/rulebase.hpp"
#include "test_helpers.hpp"

using namespace subaudit;
using fuzzy::MembershipFunction;

namespace {

bool has_kind(const std::vector<Violation>& v, Violation::Kind k) {
    return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.kind == k; });
}

fuzzy::LinguisticVariable& var(SystemConfig& s, const std::string& name) {
    return *std::find_if(s.variables.begin(), s.variables.end(), [&](const auto& v) { return v.name == name; });
}

}  // namespace

TEST_CASE("bundled system: variables, rules, output") {
    const auto s = build_paper_system();
    CHECK(s.variables.size() == 11);
    CHECK(s.rules.rules.size() == 18);
    CHECK(s.output == "Modifier");
    std::vector<std::string> ids;
    for (const auto& r : s.rules.rules) ids.push_back(r.id);
    CHECK(ids == std::vector<std::string>{"R01", "R02a", "R02b", "R03", "R04", "R07", "R08", "R09a", "R09b", "R10a",
                                          "R10b", "R11a", "R11b", "R12", "R13", "R14a", "R14b", "R15"});
    for (const auto& r : s.rules.rules) CHECK(r.weight == 1.0);
    const auto& mod = *std::find_if(s.variables.begin(), s.variables.end(), [](const auto& v) { return v.name == "Modifier"; });
    CHECK(mod.terms.size() == 9);
    CHECK(mod.universe.lo == -100.0);
    CHECK(mod.universe.hi == 100.0);
    CHECK(mod.universe.resolution == 2001);
    CHECK(mod.find("VLN")->mf(-100.0) == 1.0);
    CHECK(mod.find("VLP_70")->mf(70.0) == 1.0);
    CHECK(mod.find("VLP_70")->mf(69.9) < 1.0);
    CHECK(mod.find("Zero")->mf(0.0) == 1.0);
    // every input has a state binding
    for (const auto& v : s.variables) {
        if (v.kind != fuzzy::VariableKind::Output) CHECK_MESSAGE(s.bindings.count(v.name) == 1, v.name);
    }
    CHECK(s.rule_titles.size() >= 15);
}

TEST_CASE("bundled system parameters") {
    auto s = build_paper_system();
    const auto params = [&](const std::string& v, const std::string& t) {
        return var(s, v).find(t)->mf.parameters();
    };
    CHECK(params("P_cum", "Low") == std::vector<double>{0, 0, 0.10, 0.35});
    CHECK(params("P_cum", "Medium") == std::vector<double>{0.30, 0.50, 0.70});
    CHECK(params("P_cum", "High") == std::vector<double>{0.65, 0.75, 1, 1});
    CHECK(params("Momentum", "Falling") == std::vector<double>{-1, -1, -0.03, -0.01});
    CHECK(params("Min_played", "High") == std::vector<double>{70, 80, 100, 100});
    CHECK(params("Age", "Peak") == std::vector<double>{23, 27, 31});
    CHECK(params("Card_Y", "Yes") == std::vector<double>{0.5, 1, 1, 1.5});
    CHECK(params("Goals", "Some") == std::vector<double>{0.5, 1, 2, 2.5});
    CHECK(params("Modifier", "MN") == std::vector<double>{-55, -35, -15});
    CHECK(s.origins.at("P_cum.Low") == "published");
    CHECK(s.origins.at("P_cum.Medium") == "decision");
}

TEST_CASE("bundled system validates clean") {
    const auto v = validate_system(build_paper_system());
    for (const auto& x : v) MESSAGE(x.message);
    CHECK(v.empty());
}

TEST_CASE("validator: parameter order") {
    auto s = build_paper_system();
    for (auto& t : var(s, "P_cum").terms) {
        if (t.name == "Medium") t.mf = MembershipFunction::triangle(0.7, 0.5, 0.3);
    }
    CHECK(has_kind(validate_system(s), Violation::Kind::ParameterOrder));
}

TEST_CASE("validator: dangling reference after deleting a term") {
    auto s = build_paper_system();
    auto& terms = var(s, "Goals").terms;
    terms.erase(std::remove_if(terms.begin(), terms.end(), [](const auto& t) { return t.name == "Many"; }), terms.end());
    const auto v = validate_system(s);
    CHECK(has_kind(v, Violation::Kind::DanglingReference));
}

TEST_CASE("validator: input coverage gap and output gap") {
    auto s = build_paper_system();
    auto& terms = var(s, "P_cum").terms;
    terms.erase(std::remove_if(terms.begin(), terms.end(), [](const auto& t) { return t.name == "Medium"; }), terms.end());
    // rules that used Medium now dangle; coverage between 0.35 and 0.65 is gone
    CHECK(has_kind(validate_system(s), Violation::Kind::CoverageGap));

    auto o = build_paper_system();
    auto& out = var(o, "Modifier").terms;
    out.erase(std::remove_if(out.begin(), out.end(), [](const auto& t) { return t.name == "VLN"; }), out.end());
    CHECK(has_kind(validate_system(o), Violation::Kind::OutputGap));
}

TEST_CASE("validator: switch variables are exempt from coverage") {
    auto s = build_paper_system();
    CHECK(var(s, "Card_Y").kind == fuzzy::VariableKind::Switch);
    CHECK(var(s, "Card_Y").find("Yes")->mf(0.25) == 0.0);
    CHECK_FALSE(has_kind(validate_system(s), Violation::Kind::CoverageGap));
    var(s, "Card_Y").kind = fuzzy::VariableKind::Input;
    CHECK(has_kind(validate_system(s), Violation::Kind::CoverageGap));
}

TEST_CASE("validator: support outside universe and duplicates") {
    auto s = build_paper_system();
    var(s, "Age").terms.push_back({"Ancient", MembershipFunction::trapezoid(40, 50, 60, 70)});
    CHECK(has_kind(validate_system(s), Violation::Kind::OutsideUniverse));
    auto d = build_paper_system();
    d.variables.push_back(d.variables.front());
    CHECK(has_kind(validate_system(d), Violation::Kind::DuplicateName));
}

TEST_CASE("bundled asset files equal the compiled-in copies") {
    const std::string dir = std::string(SUBAUDIT_SOURCE_DIR) + "/assets/";
    CHECK(test::read_file(dir + "paper_variables.json") == bundled_variables_text());
    CHECK(test::read_file(dir + "paper_rules.fuzz") == bundled_rules_text());
    const auto from_files = load_system_files(dir + "paper_variables.json", dir + "paper_rules.fuzz");
    CHECK(from_files.rules == build_paper_system().rules);
}

TEST_CASE("variable documents round-trip through JSON") {
    const auto s = build_paper_system();
    const auto doc = fuzzy::variables_to_json(s.variables);
    const auto back = fuzzy::variables_from_json(nlohmann::json::parse(doc.dump()));
    CHECK(back == s.variables);
}

TEST_CASE("load errors") {
    CHECK_THROWS_AS(load_system("{not json", ""), SchemaError);
    CHECK_THROWS_AS(load_system(R"({"variables": [{"name": "x", "universe": [0], "terms": []}]})", ""), SchemaError);
    CHECK_THROWS_AS(load_system_files("/nonexistent/v.json", "/nonexistent/r.fuzz"), SchemaError);
}

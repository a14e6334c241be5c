#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>

#include <unistd.h>
#include <sys/wait.h>

#include <json.hpp>

#include "subaudit/csv.hpp"
#include "subaudit/ingest.hpp"
#include "test_helpers.hpp"

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("subaudit_cli_" + std::to_string(::getpid()) + "_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + (env.empty() ? "" : " ") + "\"" + SUBAUDIT_CLI + "\" " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string fixture_dir() { return SUBAUDIT_FIXTURE_DIR; }
std::string golden(const std::string& name) { return std::string(SUBAUDIT_GOLDEN_DIR) + "/" + name; }

}  // namespace

TEST_CASE("usage errors exit 1") {
    CHECK(run("") == 1);
    CHECK(run("frobnicate") == 1);
    CHECK(run("compute") == 1);  // --input missing
    CHECK(run("compute --input " + fixture_dir() + " --bogus") == 1);
    CHECK(run("--help") == 0);
}

TEST_CASE("data errors exit 2") {
    const auto dir = scratch("data_errors");
    CHECK(run("compute --input " + (dir / "missing").string() + " --output " + dir.string()) == 2);
    CHECK(run("audit --input " + fixture_dir() + " --match 999 --output " + dir.string()) == 2);
    const auto bad_config = dir / "bad.json";
    {
        std::ofstream out(bad_config);
        out << R"({"priority": {"alpha": -2}})";
    }
    CHECK(run("audit --input " + fixture_dir() + " --config " + bad_config.string() + " --output " + dir.string()) == 2);
    // an events table without required columns
    const auto broken = dir / "broken";
    fs::create_directories(broken);
    fs::copy_file(fixture_dir() + "/players.csv", broken / "players.csv");
    fs::copy_file(fixture_dir() + "/matches_Synthetic.csv", broken / "matches_Synthetic.csv");
    {
        std::ofstream out(broken / "events_Broken.csv");
        out << "matchId,teamId\n1,2\n";
    }
    CHECK(run("compute --input " + broken.string() + " --output " + dir.string()) == 2);
    fs::remove_all(dir);
}

TEST_CASE("compute and audit reproduce the committed goldens byte for byte") {
    for (const std::string env : {"", "SUBAUDIT_KERNELS=scalar"}) {
        CAPTURE(env);
        const auto dir = scratch("golden" + std::to_string(env.size()));
        REQUIRE(run("compute --input " + fixture_dir() + " --output " + dir.string(), env) == 0);
        CHECK(test::read_file((dir / "dataset.csv").string()) == test::read_file(golden("dataset.csv")));
        REQUIRE(run("audit --match 2057978 --input " + fixture_dir() + " --output " + dir.string(), env) == 0);
        CHECK(test::read_file((dir / "timeline.csv").string()) == test::read_file(golden("timeline.csv")));
        CHECK(test::read_file((dir / "latency.csv").string()) == test::read_file(golden("latency.csv")));
        const auto audit = nlohmann::json::parse(test::read_file((dir / "audit_2057978.json").string()));
        CHECK(audit["match_id"] == "2057978");
        CHECK(audit["slices"].size() == 19);  // stoppage time reaches the 95' slice
        const auto cfg = nlohmann::json::parse(test::read_file((dir / "run_config.json").string()));
        CHECK(cfg["priority"]["alpha"] == 0.25);
        fs::remove_all(dir);
    }
}

TEST_CASE("audit from a precomputed dataset matches a fresh audit") {
    const auto dir = scratch("dataset");
    REQUIRE(run("compute --input " + fixture_dir() + " --output " + dir.string()) == 0);
    const auto fresh = dir / "fresh";
    const auto reuse = dir / "reuse";
    REQUIRE(run("audit --input " + fixture_dir() + " --output " + fresh.string()) == 0);
    REQUIRE(run("audit --input " + fixture_dir() + " --dataset " + (dir / "dataset.csv").string() + " --output " +
                reuse.string()) == 0);
    // the dataset carries 9 significant digits, so the last printed decimal may differ
    const auto a = subaudit::csv::read_file((fresh / "timeline.csv").string());
    const auto b = subaudit::csv::read_file((reuse / "timeline.csv").string());
    REQUIRE(a.rows.size() == b.rows.size());
    CHECK(a.header == b.header);
    for (std::size_t r = 0; r < a.rows.size(); ++r) {
        for (std::size_t c = 0; c < a.header.size(); ++c) {
            const auto& x = a.rows[r][c];
            const auto& y = b.rows[r][c];
            if (x.find('.') == std::string::npos) {
                CHECK(x == y);
            } else {
                CHECK(std::abs(std::stod(x) - std::stod(y)) <= 2e-6);
            }
        }
    }
    fs::remove_all(dir);
}

TEST_CASE("other subcommands") {
    const auto dir = scratch("others");
    const auto events = dir / "events.jsonl";
    REQUIRE(run("ingest --input " + fixture_dir() + " --dump-events " + events.string()) == 0);
    const auto text = test::read_file(events.string());
    CHECK(std::count(text.begin(), text.end(), '\n') > 1000);
    CHECK(run("latency --input " + fixture_dir() + " --output " + dir.string()) == 0);
    CHECK(test::read_file((dir / "latency.csv").string()) == test::read_file(golden("latency.csv")));
    CHECK(run("export --input " + fixture_dir() + " --output " + dir.string()) == 0);
    CHECK(fs::file_size(dir / "plot.csv") > 1000);
    CHECK(run("report --input " + fixture_dir() + " --output " + dir.string()) == 0);
    const auto report = nlohmann::json::parse(test::read_file((dir / "report.json").string()));
    CHECK(report["matches"] == 1);
    CHECK(report["teams"] == 2);
    CHECK(report["player_directory"] == 24);
    CHECK(run("audit --input " + fixture_dir() + " --variables " + std::string(SUBAUDIT_SOURCE_DIR) +
              "/assets/paper_variables.json --rules " + std::string(SUBAUDIT_SOURCE_DIR) + "/assets/paper_rules.fuzz --output " +
              (dir / "files").string()) == 0);
    CHECK(test::read_file((dir / "files" / "timeline.csv").string()) == test::read_file(golden("timeline.csv")));
    fs::remove_all(dir);
}

TEST_CASE("golden dataset rows agree with a hand computation for three players") {
    // Straight from the raw event table: per-slice weighted actions over the
    // team's absolute weighted volume, slice counts, cards, goals, assists.
    const auto events = subaudit::csv::read_file(fixture_dir() + "/events_Synthetic.csv");
    const auto dataset = subaudit::csv::read_file(golden("dataset.csv"));
    const auto col = [&](const subaudit::csv::Table& t, const char* name) { return *t.column(name); };

    const auto weight = [](const std::string& name, const std::string& sub, const std::string& tags) {
        const auto has = [&](const char* code) { return tags.find(std::string(": ") + code + "}") != std::string::npos; };
        double w = 0.0;
        if (name == "Pass" && has("1801")) w += 1.0;
        if (name == "Pass" && has("1802")) w -= 1.0;
        if (name == "Shot" && has("1801")) w += 2.0;
        if (name == "Duel" && has("703")) w += 1.0;
        if (name == "Duel" && has("701")) w -= 1.0;
        if (has("1401")) w += 1.0;
        if (name == "Others on the ball" && sub == "Clearance") w += 0.5;
        if (name == "Foul") w -= 1.0;
        return w;
    };

    std::map<std::pair<std::string, int>, double> player_sum, team_volume;
    std::map<std::string, std::vector<std::pair<int, std::string>>> notable;  // player -> (slice, kind)
    for (const auto& row : events.rows) {
        const double sec = std::stod(row[col(events, "eventSec")]) + (row[col(events, "matchPeriod")] == "2H" ? 2700.0 : 0.0);
        const int slice = static_cast<int>(sec / 300.0);
        const std::string team = row[col(events, "teamId")], player = row[col(events, "playerId")];
        const std::string name = row[col(events, "eventName")], sub = row[col(events, "subEventName")];
        const std::string tags = row[col(events, "tags")];
        const double w = weight(name, sub, tags);
        player_sum[{player, slice}] += w;
        team_volume[{team, slice}] += std::abs(w);
        if (tags.find(": 1702}") != std::string::npos) notable[player].push_back({slice, "card"});
        if (tags.find(": 101}") != std::string::npos) notable[player].push_back({slice, "goal"});
        if (tags.find(": 302}") != std::string::npos) notable[player].push_back({slice, "assist"});
    }

    // 1002: carded defender; 1010: scoring forward replaced at 70'; 2012: substitute without a birth date
    const std::map<std::string, int> expected_age = {{"1002", -1}, {"1010", -1}, {"2012", 26}};
    for (const auto& [player, age] : expected_age) {
        CAPTURE(player);
        int count = 0;
        for (const auto& row : dataset.rows) {
            if (row[col(dataset, "playerId")] != player) continue;
            ++count;
            const int label = std::stoi(row[col(dataset, "Tempo_Partida")]);
            const int slice = label / 5 - 1;
            const std::string team = row[col(dataset, "teamId")];
            const double vol = team_volume[{team, slice}];
            const double tech = vol > 0 ? player_sum[{player, slice}] / vol : 0.0;
            CHECK(std::stod(row[col(dataset, "score_tecnico_fatia")]) == doctest::Approx(tech).epsilon(1e-8));
            const double net = std::stod(row[col(dataset, "score_rede_fatia")]);
            CHECK(std::stod(row[col(dataset, "playerank_fatia_raw")]) == doctest::Approx(0.8 * tech + 0.2 * net).epsilon(1e-8));
            CHECK(std::stoi(row[col(dataset, "minutes_played")]) == 5 * count);
            int cards = 0, goals = 0, assists = 0;
            for (const auto& [s, kind] : notable[player]) {
                if (s > slice) continue;
                cards = kind == "card" ? 1 : cards;
                goals += kind == "goal";
                assists += kind == "assist";
            }
            CHECK(std::stoi(row[col(dataset, "cartao_amarelo")]) == cards);
            CHECK(std::stoi(row[col(dataset, "goals_scored")]) == goals);
            CHECK(std::stoi(row[col(dataset, "assists")]) == assists);
            if (age > 0) CHECK(std::stoi(row[col(dataset, "player_age")]) == age);
        }
        CHECK(count > 3);
    }
}

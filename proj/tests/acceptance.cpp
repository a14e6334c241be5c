// Exit-gate checks. One PASS/FAIL/SKIP line per criterion; nonzero exit on any FAIL.
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <set>
#include <iostream>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "subaudit/audit_io.hpp"
#include "subaudit/fuzzy/engine.hpp"
#include "subaudit/ingest.hpp"
#include "subaudit/metrics.hpp"
#include "subaudit/priority.hpp"
#include "subaudit/rulebase.hpp"

using namespace subaudit;

namespace {

enum class Outcome { Pass, Fail, Skip };

struct Verdict {
    Outcome outcome = Outcome::Pass;
    std::string detail;
};

struct Check {
    Verdict v;
    void expect(bool ok, const std::string& what) {
        if (!ok && v.outcome != Outcome::Fail) {
            v.outcome = Outcome::Fail;
            v.detail = what;
        }
    }
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const PriorityModel& paper_model() {
    static const PriorityModel m(build_paper_system());
    return m;
}

PlayerSliceState neutral(Role role) {
    PlayerSliceState s;
    s.match_id = "1";
    s.player_id = "10";
    s.team_id = "100";
    s.tempo_partida = 50;
    s.minutes_played = 50;
    s.playerank_acumulativo_media_percentil = 0.5;
    s.player_age = 27;
    s.player_position = role;
    return s;
}

double strength(const PriorityResult& r, const std::string& rule) {
    for (const auto& a : r.trace.rules) {
        if (a.rule_id == rule) return a.strength;
    }
    return -1.0;
}

Verdict exposure_bias() {
    Check c;
    const std::vector<double> series{0.8, 0.6, 0.4, 0.2};
    const auto mean = cumulative_mean(series);
    double running = 0.0, prev_running = -1.0;
    for (std::size_t t = 0; t < series.size(); ++t) {
        running += series[t];
        c.expect(running >= prev_running, "running sum decreased");
        prev_running = running;
        if (t >= 1) c.expect(mean[t] < mean[t - 1], "mean not strictly decreasing at slice " + std::to_string(t + 1));
    }
    c.expect(mean[0] == 0.8 && mean[1] == 0.7, "mean values");
    return c.v;
}

Verdict oracle_equivalence() {
    Check c;
    std::mt19937_64 rng(20240601);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        auto sys = oracle::random_system(rng, trial % 2 == 1);
        const fuzzy::Engine e(sys.variables, sys.rules);
        const double span = e.output().universe.span();
        const auto x = oracle::random_inputs(rng, sys.variables);
        const double err = std::abs(e.evaluate(x) - oracle::evaluate(sys.variables, sys.rules, x, 100001)) / span;
        worst = std::max(worst, err);
    }
    c.expect(worst <= 1e-3, "worst relative error " + std::to_string(worst));
    if (c.v.outcome == Outcome::Pass) c.v.detail = "worst error " + std::to_string(worst) + " of span";
    return c.v;
}

Verdict membership_exactness() {
    Check c;
    const auto near = [](double a, double b) { return std::abs(a - b) <= 1e-12; };
    // anchored examples
    const auto low = fuzzy::MembershipFunction::trapezoid(0, 0, 0.10, 0.35);
    c.expect(near(low(0.05), 1.0) && near(low(0.225), 0.5), "P_cum Low");
    const auto falling = fuzzy::MembershipFunction::trapezoid(-1, -1, -0.03, -0.01);
    c.expect(near(falling(-0.02), 0.5), "Momentum Falling");
    const auto yes = fuzzy::MembershipFunction::trapezoid(0.5, 1, 1, 1.5);
    c.expect(near(yes(1.0), 1.0) && near(yes(0.75), 0.5) && near(yes(0.0), 0.0), "switch Yes");
    // every term of the shipped system: plateau 1, edge midpoints 0.5
    int checked = 0;
    for (const auto& var : build_paper_system().variables) {
        for (const auto& term : var.terms) {
            const auto& p = term.mf.corners();
            const std::string id = var.name + "." + term.name;
            c.expect(near(term.mf(0.5 * (p[1] + p[2])), 1.0), id + " plateau");
            if (p[1] > p[0]) c.expect(near(term.mf(0.5 * (p[0] + p[1])), 0.5), id + " rising midpoint");
            if (p[3] > p[2]) c.expect(near(term.mf(0.5 * (p[2] + p[3])), 0.5), id + " falling midpoint");
            ++checked;
        }
    }
    if (c.v.outcome == Outcome::Pass) c.v.detail = std::to_string(checked) + " terms";
    return c.v;
}

Verdict priority_equations() {
    Check c;
    const PriorityConfig cfg;
    c.expect(baseline(0.0) == 100.0 && baseline(1.0) == 0.0 && baseline(0.28) == 72.0, "baseline examples");
    c.expect(final_priority(72.0, 0.0, cfg) == 72.0, "no modifier");
    c.expect(final_priority(95.0, 60.0, cfg) == 100.0, "upper clamp");
    c.expect(final_priority(10.0, -60.0, cfg) == 0.0, "lower clamp");
    c.expect(final_priority(50.0, 20.0, cfg) == 55.0, "interior");

    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u01(0.0, 1.0), um(-1.0, 1.0);
    std::uniform_int_distribution<int> minutes(0, 100), age(15, 45), count(0, 3), bit(0, 1), role(0, 3);
    for (int i = 0; i < 10000; ++i) {
        PlayerSliceState s = neutral(static_cast<Role>(role(rng)));
        s.playerank_acumulativo_media_percentil = u01(rng);
        s.momentum_rate = um(rng);
        s.minutes_played = minutes(rng);
        s.player_age = age(rng);
        s.goals_scored = count(rng);
        s.assists = count(rng);
        s.cartao_amarelo = bit(rng);
        const auto r = paper_model().score(s);
        const double pre = r.baseline + cfg.alpha * r.modifier;
        c.expect(std::abs(pre - r.baseline) <= 25.0, "deviation above 25 at state " + std::to_string(i));
        c.expect(r.p_final == std::clamp(pre, 0.0, 100.0), "clamp mismatch at state " + std::to_string(i));
    }
    return c.v;
}

Verdict rule_directions() {
    Check c;
    const auto& m = paper_model();

    auto high = neutral(Role::Midfielder);
    high.playerank_acumulativo_media_percentil = 0.9;
    const auto r01 = m.score(high);
    c.expect(strength(r01, "R01") > 0.0 && r01.modifier < 0.0, "R01: high P_cum not negative");

    auto def = neutral(Role::Defender);
    const auto before = m.score(def);
    def.cartao_amarelo = 1;
    const auto r03 = m.score(def);
    c.expect(strength(r03, "R03") > 0.0 && r03.p_final > before.p_final, "R03: carded defender not raised");

    auto fw = neutral(Role::Forward);
    fw.playerank_acumulativo_media_percentil = 0.15;
    auto scorer = fw;
    scorer.goals_scored = 1;
    const auto r08 = m.score(fw);
    c.expect(strength(r08, "R08") > 0.0 && r08.modifier > 0.0 && r08.modifier > m.score(scorer).modifier,
             "R08: scoreless forward not raised");

    auto young = neutral(Role::Forward);
    young.player_age = 19;
    young.goals_scored = 1;
    const auto r13 = m.score(young);
    c.expect(strength(r13, "R13") > 0.0 && r13.modifier < -35.0, "R13: young scorer not strongly protected");

    for (Role role : {Role::Defender, Role::Midfielder, Role::Forward, Role::Goalkeeper}) {
        const auto r15 = m.score(neutral(role));
        c.expect(strength(r15, "R15") > 0.0 && std::abs(r15.modifier) <= 2.0,
                 "R15: neutral modifier " + std::to_string(r15.modifier));
    }
    return c.v;
}

struct PipelineOutput {
    std::string dataset, timeline, latency;
};

PipelineOutput run_fixture(const std::string& dir) {
    const auto tables = load_input_directory(dir);
    const auto config = default_pipeline_config();
    std::vector<PlayerSliceState> states;
    std::vector<MatchAudit> audits;
    for (const auto& match : tables.matches) {
        auto ds = compute_match(match, tables.events, tables.players, config);
        audits.push_back(audit_match(ds.states, match, paper_model()));
        states.insert(states.end(), ds.states.begin(), ds.states.end());
    }
    std::ostringstream d, t, l;
    write_dataset_csv(d, states);
    write_timeline_csv(t, audits, paper_model().config());
    write_latency_csv(l, audits);
    return {d.str(), t.str(), l.str()};
}

Verdict golden_fixture() {
    Check c;
    const std::string golden = SUBAUDIT_GOLDEN_DIR;
    const auto first = run_fixture(SUBAUDIT_FIXTURE_DIR);
    const auto second = run_fixture(SUBAUDIT_FIXTURE_DIR);
    c.expect(first.dataset == second.dataset && first.timeline == second.timeline && first.latency == second.latency,
             "two runs differ");
    c.expect(first.dataset == read_file(golden + "/dataset.csv"), "dataset.csv differs from golden");
    c.expect(first.timeline == read_file(golden + "/timeline.csv"), "timeline.csv differs from golden");
    c.expect(first.latency == read_file(golden + "/latency.csv"), "latency.csv differs from golden");
    return c.v;
}

const char* dataset_dir() { return std::getenv("SUBAUDIT_DATASET_DIR"); }

std::optional<std::string> player_named(const PlayerDirectory& players, const std::string& short_name) {
    for (const auto& [id, p] : players) {
        if (p.name.find(short_name) != std::string::npos) return id;
    }
    return std::nullopt;
}

struct DatasetAudit {
    MatchAudit audit;
    PlayerDirectory players;
};

std::optional<DatasetAudit> brazil_belgium() {
    static std::optional<DatasetAudit> cached;
    if (cached) return cached;
    // The reference match is the one where both Fagner and Chadli have events.
    const auto tables = load_input_directory(dataset_dir());
    const auto a = player_named(tables.players, "Fagner"), b = player_named(tables.players, "Chadli");
    if (!a || !b) return std::nullopt;
    std::set<std::string> with_a, both;
    for (const auto& ev : tables.events) {
        if (ev.player_id == *a) with_a.insert(ev.match_id);
    }
    for (const auto& ev : tables.events) {
        if (ev.player_id == *b && with_a.count(ev.match_id)) both.insert(ev.match_id);
    }
    for (const auto& match : tables.matches) {
        if (!both.count(match.match_id)) continue;
        const auto ds = compute_match(match, tables.events, tables.players, default_pipeline_config());
        cached = DatasetAudit{audit_match(ds.states, match, paper_model()), tables.players};
    }
    return cached;
}

const PriorityResult* result_at(const MatchAudit& a, int slice, const std::string& player) {
    for (const auto& s : a.slices) {
        if (s.tempo_partida != slice) continue;
        for (const auto& r : s.results) {
            if (r.player_id == player) return &r;
        }
    }
    return nullptr;
}

Verdict reference_match() {
    if (!dataset_dir()) return {Outcome::Skip, "SUBAUDIT_DATASET_DIR not set"};
    Check c;
    const auto data = brazil_belgium();
    if (!data) return {Outcome::Fail, "reference match not found in dataset"};
    const auto& a = data->audit;
    const auto id = [&](const char* name) { return player_named(data->players, name).value_or(""); };
    const auto fagner = id("Fagner"), jesus = id("Gabriel Jesus"), willian = id("Willian"), paulinho = id("Paulinho");
    for (int slice = 45; slice <= 85; slice += 5) {
        const auto* r = result_at(a, slice, fagner);
        c.expect(r && r->rank == 1 && r->p_final == 100.0, "Fagner not rank 1 at 100 in slice " + std::to_string(slice));
    }
    for (int slice : {55, 60}) {
        const auto* r = result_at(a, slice, jesus);
        c.expect(r && r->rank <= 2 && std::abs(r->p_final - 99.1) <= 5.0, "Gabriel Jesus at " + std::to_string(slice));
    }
    for (int slice : {40, 45}) {
        const auto* r = result_at(a, slice, willian);
        c.expect(r && std::abs(r->p_final - 72.0) <= 5.0, "Willian at " + std::to_string(slice));
    }
    for (int slice : {65, 70}) {
        const auto* r = result_at(a, slice, paulinho);
        c.expect(r && std::abs(r->p_final - 93.1) <= 5.0, "Paulinho at " + std::to_string(slice));
    }
    return c.v;
}

Verdict boundary_player() {
    if (!dataset_dir()) return {Outcome::Skip, "SUBAUDIT_DATASET_DIR not set"};
    Check c;
    const auto data = brazil_belgium();
    if (!data) return {Outcome::Fail, "reference match not found in dataset"};
    const auto chadli = player_named(data->players, "Chadli").value_or("");
    bool seen = false;
    for (const auto& s : data->audit.slices) {
        if (s.tempo_partida > 85) continue;
        if (const auto* r = result_at(data->audit, s.tempo_partida, chadli)) {
            seen = true;
            c.expect(r->p_final < 50.0, "p_final " + std::to_string(r->p_final) + " at " + std::to_string(s.tempo_partida));
        }
    }
    c.expect(seen, "player has no audited slices");
    return c.v;
}

Verdict latency_arithmetic() {
    Check c;
    const auto res = [](const std::string& player, int slice, double p) {
        PriorityResult r;
        r.player_id = player;
        r.team_id = "100";
        r.tempo_partida = slice;
        r.p_final = p;
        return r;
    };
    MatchAudit a;
    a.match_id = "1";
    for (int slice = 5; slice <= 90; slice += 5) {
        a.slices.push_back({slice,
                            {res("late", slice, slice >= 35 ? 95.0 : 40.0), res("never_subbed", slice, 99.0),
                             res("calm", slice, 50.0), res("early_sub", slice, slice >= 80 ? 91.0 : 20.0)}});
    }
    a.substitutions = {{87, "100", "late", "x1"}, {60, "100", "calm", "x2"}, {70, "100", "early_sub", "x3"}};
    const auto entries = decision_latency(a, PriorityConfig{});
    const auto get = [&](const std::string& id) -> const LatencyEntry* {
        for (const auto& e : entries) {
            if (e.player_id == id) return &e;
        }
        return nullptr;
    };
    const auto* late = get("late");
    c.expect(late && late->latency_minutes == 52, "critical 35, substituted 87 should give 52");
    const auto* never = get("never_subbed");
    c.expect(never && !never->latency_minutes, "never substituted should give none");
    const auto* calm = get("calm");
    c.expect(calm && !calm->latency_minutes, "never critical should give none");
    const auto* early = get("early_sub");
    c.expect(early && early->latency_minutes == 0, "substitution before the first critical slice should give 0");
    return c.v;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
        {"exposure-bias property", exposure_bias},
        {"fuzzy core matches fine-grid oracle (200 systems)", oracle_equivalence},
        {"membership exactness", membership_exactness},
        {"baseline and final priority exactness", priority_equations},
        {"rule-direction suite", rule_directions},
        {"golden fixture pipeline", golden_fixture},
        {"reference match reproduction (dataset)", reference_match},
        {"boundary player stays below 50 (dataset)", boundary_player},
        {"latency arithmetic", latency_arithmetic},
    };
    int failures = 0;
    for (const auto& [name, run] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = run();
        } catch (const std::exception& e) {
            v = {Outcome::Fail, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const char* tag = v.outcome == Outcome::Pass ? "PASS" : v.outcome == Outcome::Fail ? "FAIL" : "SKIP";
        failures += v.outcome == Outcome::Fail;
        std::cout << tag << "  " << name << "  (" << std::fixed << std::setprecision(3) << secs << " s)";
        if (!v.detail.empty()) std::cout << "  " << v.detail;
        std::cout << '\n';
    }
    return failures == 0 ? 0 : 1;
}

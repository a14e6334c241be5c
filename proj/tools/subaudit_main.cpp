// Command-line front end: pipeline runs, audits, reports and the HTTP service.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include "subaudit/audit_io.hpp"
#include "subaudit/error.hpp"
#include "subaudit/ingest.hpp"
#include "subaudit/metrics.hpp"
#include "subaudit/priority.hpp"
#include "subaudit/run_config.hpp"
#include "subaudit/service.hpp"

namespace fs = std::filesystem;
using namespace subaudit;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

struct JobSpec {
    std::string input_dir;
    std::vector<std::string> matches;
    std::string config_path;
    std::string variables_path;
    std::string rules_path;
    std::string output_dir = ".";
    std::string dataset_path;
    std::string dump_events;
    std::string listen;
};

struct Loaded {
    RunConfig config;
    InputTables tables;
    std::vector<const MatchRecord*> selected;
};

RunConfig resolve_config(const JobSpec& job) {
    RunConfig c = job.config_path.empty() ? RunConfig{} : load_run_config(job.config_path);
    if (!job.variables_path.empty() || !job.rules_path.empty()) {
        c.variables_path = job.variables_path;
        c.rules_path = job.rules_path;
    }
    c.validate();
    return c;
}

Loaded load(const JobSpec& job) {
    if (job.input_dir.empty()) throw Error("--input is required");
    if (!fs::is_directory(job.input_dir)) throw Error("input directory not found: " + job.input_dir);
    Loaded l{resolve_config(job), load_input_directory(job.input_dir), {}};
    const std::set<std::string> wanted(job.matches.begin(), job.matches.end());
    for (const auto& m : l.tables.matches) {
        if (wanted.empty() || wanted.count(m.match_id)) l.selected.push_back(&m);
    }
    for (const auto& id : wanted) {
        const bool found = std::any_of(l.selected.begin(), l.selected.end(),
                                       [&](const MatchRecord* m) { return m->match_id == id; });
        if (!found) throw Error("match " + id + " not found in " + job.input_dir);
    }
    return l;
}

fs::path output_dir(const JobSpec& job) {
    fs::path dir(job.output_dir);
    fs::create_directories(dir);
    return dir;
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    return out;
}

void write_run_config(const fs::path& dir, const RunConfig& config) {
    auto out = open_out(dir / "run_config.json");
    out << to_json(config).dump(2) << '\n';
}

std::vector<PlayerSliceState> compute_states(const Loaded& l) {
    std::vector<PlayerSliceState> states;
    for (const auto* m : l.selected) {
        auto ds = compute_match(*m, l.tables.events, l.tables.players, l.config.pipeline);
        for (const auto& w : ds.warnings) std::cerr << "warning: " << w << '\n';
        states.insert(states.end(), ds.states.begin(), ds.states.end());
    }
    return states;
}

std::vector<PlayerSliceState> states_for(const JobSpec& job, const Loaded& l) {
    if (job.dataset_path.empty()) return compute_states(l);
    std::ifstream in(job.dataset_path);
    if (!in) throw Error("cannot open dataset " + job.dataset_path);
    return read_dataset_csv(in);
}

std::vector<StoredMatch> audit_all(const JobSpec& job, const Loaded& l, const PriorityModel& model) {
    const auto states = states_for(job, l);
    std::vector<StoredMatch> out;
    for (const auto* m : l.selected) {
        StoredMatch sm;
        for (const auto& s : states) {
            if (s.match_id == m->match_id) sm.states.push_back(s);
        }
        sm.audit = audit_match(sm.states, *m, model);
        out.push_back(std::move(sm));
    }
    return out;
}

std::vector<MatchAudit> audits_of(const std::vector<StoredMatch>& stored) {
    std::vector<MatchAudit> a;
    for (const auto& s : stored) a.push_back(s.audit);
    return a;
}

int run_ingest(const JobSpec& job) {
    const auto l = load(job);
    std::vector<RawEvent> events;
    for (const auto& e : l.tables.events) {
        if (std::any_of(l.selected.begin(), l.selected.end(),
                        [&](const MatchRecord* m) { return m->match_id == e.match_id; })) {
            events.push_back(e);
        }
    }
    const fs::path target = job.dump_events.empty() ? output_dir(job) / "events.jsonl" : fs::path(job.dump_events);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    auto out = open_out(target);
    dump_events_jsonl(out, events);
    std::cout << "matches " << l.selected.size() << ", events " << events.size() << ", players "
              << l.tables.players.size() << " -> " << target.string() << '\n';
    return kExitOk;
}

int run_compute(const JobSpec& job) {
    const auto l = load(job);
    const auto states = compute_states(l);
    const auto dir = output_dir(job);
    auto out = open_out(dir / "dataset.csv");
    write_dataset_csv(out, states);
    write_run_config(dir, l.config);
    std::cout << states.size() << " player-slice rows -> " << (dir / "dataset.csv").string() << '\n';
    return kExitOk;
}

int run_audit(const JobSpec& job) {
    const auto l = load(job);
    const PriorityModel model(l.config.load_system(), l.config.priority, l.config.kernel_table());
    const auto stored = audit_all(job, l, model);
    const auto dir = output_dir(job);
    for (const auto& s : stored) {
        auto out = open_out(dir / ("audit_" + s.audit.match_id + ".json"));
        out << to_json(s.audit, model.config(), &model.system()).dump(2) << '\n';
    }
    const auto audits = audits_of(stored);
    {
        auto out = open_out(dir / "timeline.csv");
        write_timeline_csv(out, audits, model.config());
    }
    {
        auto out = open_out(dir / "latency.csv");
        write_latency_csv(out, audits);
    }
    write_run_config(dir, l.config);
    std::cout << "audited " << stored.size() << " match(es) -> " << dir.string() << '\n';
    return kExitOk;
}

int run_latency(const JobSpec& job) {
    const auto l = load(job);
    const PriorityModel model(l.config.load_system(), l.config.priority, l.config.kernel_table());
    const auto audits = audits_of(audit_all(job, l, model));
    const auto dir = output_dir(job);
    {
        auto out = open_out(dir / "latency.csv");
        write_latency_csv(out, audits);
    }
    write_latency_csv(std::cout, audits);
    return kExitOk;
}

int run_export(const JobSpec& job) {
    const auto l = load(job);
    const PriorityModel model(l.config.load_system(), l.config.priority, l.config.kernel_table());
    const auto audits = audits_of(audit_all(job, l, model));
    const auto dir = output_dir(job);
    auto out = open_out(dir / "plot.csv");
    write_plot_csv(out, audits, model.config());
    write_run_config(dir, l.config);
    std::cout << "plot table -> " << (dir / "plot.csv").string() << '\n';
    return kExitOk;
}

int run_report(const JobSpec& job) {
    const auto l = load(job);
    const auto states = states_for(job, l);
    std::set<std::string> teams, players_seen;
    std::size_t events = 0, substitutions = 0;
    std::set<std::string> selected;
    for (const auto* m : l.selected) {
        selected.insert(m->match_id);
        teams.insert(m->teams.begin(), m->teams.end());
        substitutions += m->substitutions.size();
    }
    for (const auto& e : l.tables.events) {
        if (selected.count(e.match_id)) {
            ++events;
            players_seen.insert(e.player_id);
        }
    }
    ojson roles = ojson::object();
    for (auto role : {Role::Goalkeeper, Role::Defender, Role::Midfielder, Role::Forward}) {
        roles[std::string(to_string(role))] = std::count_if(
            states.begin(), states.end(), [&](const PlayerSliceState& s) { return s.player_position == role; });
    }
    ojson report;
    report["matches"] = l.selected.size();
    report["teams"] = teams.size();
    report["events"] = events;
    report["players_with_events"] = players_seen.size();
    report["player_directory"] = l.tables.players.size();
    report["substitutions"] = substitutions;
    report["player_slice_rows"] = states.size();
    report["rows_by_role"] = roles;
    const auto dir = output_dir(job);
    auto out = open_out(dir / "report.json");
    out << report.dump(2) << '\n';
    std::cout << report.dump(2) << '\n';
    return kExitOk;
}

int run_serve(const JobSpec& job) {
    const auto l = load(job);
    auto model =
        std::make_shared<const PriorityModel>(l.config.load_system(), l.config.priority, l.config.kernel_table());
    AuditService service(model, audit_all(job, l, *model));
    std::string address = job.listen;
    if (address.empty()) {
        if (const char* env = std::getenv("SUBAUDIT_LISTEN")) address = env;
    }
    const auto [host, port] = parse_listen_address(address);
    std::cerr << "listening on " << host << ':' << port << '\n';
    if (!service.listen(host, port)) throw Error("cannot listen on " + host + ":" + std::to_string(port));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Substitution-priority audit: event ingest, temporal metrics, fuzzy inference and reports"};
    app.require_subcommand(1);
    JobSpec job;

    const auto add_common = [&](CLI::App* sub, bool needs_output) {
        sub->add_option("-i,--input", job.input_dir, "Directory with events_*.csv, matches_*.csv, players.csv")
            ->required();
        sub->add_option("-m,--match", job.matches, "Restrict to these match ids (repeatable)");
        sub->add_option("-c,--config", job.config_path, "Run configuration JSON")->check(CLI::ExistingFile);
        if (needs_output) sub->add_option("-o,--output", job.output_dir, "Output directory");
    };
    const auto add_system = [&](CLI::App* sub) {
        auto* v = sub->add_option("--variables", job.variables_path, "Variable definitions JSON")
                      ->check(CLI::ExistingFile);
        auto* r = sub->add_option("--rules", job.rules_path, "Rule file")->check(CLI::ExistingFile);
        v->needs(r);
        r->needs(v);
        sub->add_option("--dataset", job.dataset_path, "Use a precomputed dataset.csv instead of recomputing")
            ->check(CLI::ExistingFile);
    };

    auto* ingest = app.add_subcommand("ingest", "Parse and normalize event logs");
    add_common(ingest, true);
    ingest->add_option("--dump-events", job.dump_events, "Write normalized events as JSON lines to this file");

    auto* compute = app.add_subcommand("compute", "Compute the per-slice player dataset");
    add_common(compute, true);

    auto* audit = app.add_subcommand("audit", "Rank players per slice and write audit JSON/CSV");
    add_common(audit, true);
    add_system(audit);

    auto* latency = app.add_subcommand("latency", "Decision-latency table");
    add_common(latency, true);
    add_system(latency);

    auto* report = app.add_subcommand("report", "Dataset summary");
    add_common(report, true);
    report->add_option("--dataset", job.dataset_path, "Precomputed dataset.csv")->check(CLI::ExistingFile);

    auto* serve = app.add_subcommand("serve", "Serve audits over HTTP (address from --listen or SUBAUDIT_LISTEN)");
    add_common(serve, false);
    add_system(serve);
    serve->add_option("--listen", job.listen, "host:port");

    auto* exporter = app.add_subcommand("export", "Plot-ready priority curves");
    add_common(exporter, true);
    add_system(exporter);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*ingest) return run_ingest(job);
        if (*compute) return run_compute(job);
        if (*audit) return run_audit(job);
        if (*latency) return run_latency(job);
        if (*report) return run_report(job);
        if (*serve) return run_serve(job);
        if (*exporter) return run_export(job);
    } catch (const subaudit::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitUsage;
}

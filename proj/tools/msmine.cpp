#include "msmine/coupling.hpp"
#include "msmine/errors.hpp"
#include "msmine/fetch.hpp"
#include "msmine/graph.hpp"
#include "msmine/ingest.hpp"
#include "msmine/keydev.hpp"
#include "msmine/report.hpp"
#include "msmine/synthgen.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>

using namespace msmine;
using nlohmann::json;

namespace {

struct RunConfig {
    std::string commits_path;
    std::string issues_path;
    std::string identity_map_path;
    std::string bots_path;
    std::string services_path;
    double window_days = 365.0;
    double threshold = 5.0;
    int rare_limit = 1;
    int top_k = 3;
    std::string format = "markdown";
    bool mask = true;
    std::string out_path;
    std::string save_results_path;
    std::string window_end;
    int windows = 1;
};

// JSON config file values fill the defaults; CLI flags override them.
void apply_config_file(const std::string& path, RunConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open config '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ArgumentError(std::string("config: ") + e.what());
    }
    cfg.commits_path = j.value("commits", cfg.commits_path);
    cfg.issues_path = j.value("issues", cfg.issues_path);
    cfg.identity_map_path = j.value("identity_map", cfg.identity_map_path);
    cfg.bots_path = j.value("bots", cfg.bots_path);
    cfg.services_path = j.value("services", cfg.services_path);
    cfg.window_days = j.value("window_days", cfg.window_days);
    cfg.threshold = j.value("threshold", cfg.threshold);
    cfg.rare_limit = j.value("rare_limit", cfg.rare_limit);
    cfg.top_k = j.value("top_k", cfg.top_k);
    cfg.format = j.value("format", cfg.format);
    cfg.mask = j.value("mask", cfg.mask);
    cfg.window_end = j.value("window_end", cfg.window_end);
    cfg.windows = j.value("windows", cfg.windows);
}

void add_common_options(CLI::App* cmd, RunConfig& cfg, std::string& config_path) {
    cmd->add_option("--config", config_path, "JSON config file; flags override it");
    cmd->add_option("--commits", cfg.commits_path, "commit export (line-delimited JSON)");
    cmd->add_option("--issues", cfg.issues_path, "issue export (line-delimited JSON)");
    cmd->add_option("--identity-map", cfg.identity_map_path,
                    "JSON object {alias_email: canonical_id}");
    cmd->add_option("--bots", cfg.bots_path, "newline-separated glob patterns");
    cmd->add_option("--services", cfg.services_path,
                    "JSON object {path_prefix: service_name}");
    cmd->add_option("--window-days", cfg.window_days, "analysis window length in days");
    cmd->add_option("--threshold", cfg.threshold, "reachability distance threshold");
    cmd->add_option("--rare-limit", cfg.rare_limit, "rarely-reached developer limit");
    cmd->add_option("--top-k", cfg.top_k, "ranked entries per table cell");
    cmd->add_option("--format", cfg.format, "json | csv | markdown");
    cmd->add_flag("--mask,!--no-mask", cfg.mask, "mask developer ids in reports");
    cmd->add_option("--out", cfg.out_path, "write the rendered report here");
    cmd->add_option("--save-results", cfg.save_results_path,
                    "also write full-precision machine-readable results JSON");
    cmd->add_option("--window-end", cfg.window_end,
                    "window end, ISO-8601 (default: latest event timestamp)");
    cmd->add_option("--windows", cfg.windows, "number of consecutive coupling windows");
}

void emit(const std::string& doc, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << doc;
        return;
    }
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw ArgumentError("cannot write '" + out_path + "'");
    out << doc;
}

ActivityLog load_log(const RunConfig& cfg) {
    std::vector<RawCommit> commits;
    std::vector<IssueEvent> issues;
    if (!cfg.commits_path.empty()) commits = load_commits(cfg.commits_path);
    if (!cfg.issues_path.empty()) issues = load_issues(cfg.issues_path);
    if (!cfg.identity_map_path.empty()) {
        auto map = load_identity_map(cfg.identity_map_path);
        std::tie(commits, issues) =
            unify_identities(std::move(commits), std::move(issues), map);
    } else {
        std::tie(commits, issues) =
            unify_identities(std::move(commits), std::move(issues), IdentityMap{});
    }
    ActivityLog log = make_activity_log(std::move(commits), std::move(issues));
    if (!cfg.bots_path.empty()) log = filter_bots(log, load_bot_filter(cfg.bots_path));
    return log;
}

Instant latest_event(const ActivityLog& log) {
    Instant latest = 0;
    if (!log.commits.empty()) latest = std::max(latest, log.commits.back().timestamp);
    if (!log.issues.empty()) latest = std::max(latest, log.issues.back().timestamp);
    return latest;
}

Instant earliest_event(const ActivityLog& log) {
    Instant earliest = std::numeric_limits<Instant>::max();
    if (!log.commits.empty()) earliest = std::min(earliest, log.commits.front().timestamp);
    if (!log.issues.empty()) earliest = std::min(earliest, log.issues.front().timestamp);
    return earliest;
}

MetricLists compute_metrics(const ArtifactGraph& graph, const AnalysisConfig& config) {
    MetricLists lists;
    try {
        lists.jack = jack_scores(graph, config);
    } catch (const EmptyDomainError&) {
    }
    try {
        lists.maven = maven_scores(graph, config);
    } catch (const EmptyDomainError&) {
    }
    try {
        lists.connector = connector_scores(graph, config);
    } catch (const EmptyDomainError&) {
    }
    return lists;
}

int cmd_keydevs(const RunConfig& cfg) {
    if (cfg.services_path.empty()) {
        std::cerr << "error: no services configured (--services)\n";
        return 1;
    }
    const ServiceMap map = ServiceMap::load(cfg.services_path);
    const ActivityLog log = load_log(cfg);

    AnalysisConfig analysis;
    analysis.distance_threshold = cfg.threshold;
    analysis.rare_reach_limit = cfg.rare_limit;
    analysis.window_length_days = cfg.window_days;
    analysis.top_k = cfg.top_k;
    analysis.mask_ids = cfg.mask;
    analysis.validate();

    KeyDevResults results;
    results.window.length_days = cfg.window_days;
    results.window.end =
        cfg.window_end.empty() ? latest_event(log) : parse_instant(cfg.window_end);

    if (!log.commits.empty() || !log.issues.empty()) {
        results.global = compute_metrics(build_graph(log, results.window), analysis);
        for (const auto& svc : map.services()) {
            const ActivityLog scoped = scope_to_service(log, map, svc);
            results.per_service[svc] =
                compute_metrics(build_graph(scoped, results.window), analysis);
        }
    }

    ReportConfig rc{parse_format(cfg.format), cfg.mask, cfg.top_k, cfg.out_path};
    emit(render_keydev_table(results, rc), cfg.out_path);
    if (!cfg.save_results_path.empty()) {
        emit(keydev_results_to_json(results), cfg.save_results_path);
    }
    return 0;
}

int cmd_coupling(const RunConfig& cfg) {
    if (cfg.services_path.empty()) {
        std::cerr << "error: no services configured (--services)\n";
        return 1;
    }
    const ServiceMap map = ServiceMap::load(cfg.services_path);
    if (map.services().size() < 2) {
        std::cerr << "error: coupling needs at least 2 services\n";
        return 1;
    }
    const ActivityLog log = load_log(cfg);

    const auto len = static_cast<Instant>(cfg.window_days * kSecondsPerDay);
    Instant first;
    if (!cfg.window_end.empty()) {
        first = parse_instant(cfg.window_end) - static_cast<Instant>(cfg.windows) * len;
    } else if (!log.commits.empty() || !log.issues.empty()) {
        first = earliest_event(log);
    } else {
        first = 0;
    }
    const auto windows = windowed_coupling(log, map, first, cfg.window_days, cfg.windows);

    ReportConfig rc{parse_format(cfg.format), cfg.mask, cfg.top_k, cfg.out_path};
    emit(render_coupling_table(windows, rc), cfg.out_path);
    if (!cfg.save_results_path.empty()) {
        emit(coupling_results_to_json(windows), cfg.save_results_path);
    }
    return 0;
}

int cmd_report(const std::string& in_path, const RunConfig& cfg) {
    std::ifstream in(in_path);
    if (!in) {
        std::cerr << "error: cannot open '" << in_path << "'\n";
        return 1;
    }
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    json j = json::parse(text, nullptr, false);
    const std::string kind = j.is_object() ? j.value("kind", "") : "";
    ReportConfig rc{parse_format(cfg.format), cfg.mask, cfg.top_k, cfg.out_path};
    if (kind == "keydevs") {
        emit(render_keydev_table(keydev_results_from_json(text), rc), cfg.out_path);
    } else if (kind == "coupling") {
        emit(render_coupling_table(coupling_results_from_json(text), rc), cfg.out_path);
    } else {
        std::cerr << "error: '" << in_path << "' is not a saved results file\n";
        return 1;
    }
    return 0;
}

int cmd_suggest_aliases(const RunConfig& cfg) {
    if (cfg.commits_path.empty()) {
        std::cerr << "error: --commits is required\n";
        return 1;
    }
    const auto suggestions = suggest_aliases(load_commits(cfg.commits_path));
    std::string doc;
    for (const auto& s : suggestions) {
        doc += s.email_a + "\t" + s.email_b + "\t" + s.evidence + "\n";
    }
    emit(doc, cfg.out_path);
    return 0;
}

int cmd_fetch(const std::string& repo, const std::string& since,
              const std::string& until, const std::string& out_dir,
              const std::string& base_url) {
    const char* token = std::getenv("MSMINE_GITHUB_TOKEN");
    if (!token) token = std::getenv("GITHUB_TOKEN");
    if (!token) {
        std::cerr << "error: set MSMINE_GITHUB_TOKEN (the token is never taken "
                     "as a flag)\n";
        return 1;
    }
    FetchOptions opts;
    opts.repo = repo;
    opts.token = token;
    opts.since = parse_instant(since);
    opts.until = parse_instant(until);
    opts.out_dir = out_dir;
    if (!base_url.empty()) opts.base_url = base_url;
    const auto result = fetch_remote(opts);
    std::cout << result.commits_path << "\n" << result.issues_path << "\n";
    return 0;
}

int cmd_synth(const std::string& name, const std::string& out_dir,
              std::uint64_t seed_override, bool seed_given) {
    Scenario scenario;
    if (name == "decoupled") scenario = decoupled_scenario();
    else if (name == "floater") scenario = floater_scenario();
    else if (name == "planted") scenario = planted_keydev_scenario();
    else if (name == "desk") scenario = desk_scale_scenario();
    else {
        std::cerr << "error: unknown scenario '" << name
                  << "' (decoupled|floater|planted|desk)\n";
        return 1;
    }
    if (seed_given) scenario.seed = seed_override;
    auto [log, truth] = generate(scenario);
    std::filesystem::create_directories(out_dir);
    const auto dir = std::filesystem::path(out_dir);
    write_commits((dir / "commits.jsonl").string(), log.commits);
    write_issues((dir / "issues.jsonl").string(), log.issues);
    json services;
    for (const auto& [prefix, svc] : scenario_service_map(scenario).entries) {
        services[prefix] = svc;
    }
    std::ofstream svc_out(dir / "services.json");
    svc_out << services.dump(2) << "\n";
    std::cout << "wrote " << log.commits.size() << " commits, " << log.issues.size()
              << " issue events to " << out_dir << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Key developer identification and organizational coupling "
                 "analysis for microservice monorepos"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path;

    auto* keydevs = app.add_subcommand(
        "keydevs", "identify Jack/Maven/Connector developers per service");
    add_common_options(keydevs, cfg, config_path);

    auto* coupling = app.add_subcommand(
        "coupling", "organizational coupling matrices and per-developer totals");
    add_common_options(coupling, cfg, config_path);

    auto* report = app.add_subcommand("report", "re-render saved results JSON");
    std::string report_in;
    report->add_option("--in", report_in, "saved results JSON")->required();
    report->add_option("--format", cfg.format, "json | csv | markdown");
    report->add_flag("--mask,!--no-mask", cfg.mask, "mask developer ids");
    report->add_option("--top-k", cfg.top_k, "ranked entries per table cell");
    report->add_option("--out", cfg.out_path, "write the rendered report here");

    auto* aliases = app.add_subcommand(
        "suggest-aliases", "report candidate developer email aliases (advisory)");
    aliases->add_option("--commits", cfg.commits_path, "commit export")->required();
    aliases->add_option("--out", cfg.out_path, "write suggestions here");

    auto* fetch = app.add_subcommand(
        "fetch", "download commits and issues via the code-hosting REST API");
    std::string repo, since, until, fetch_out, base_url;
    fetch->add_option("--repo", repo, "owner/name")->required();
    fetch->add_option("--since", since, "range start, ISO-8601")->required();
    fetch->add_option("--until", until, "range end, ISO-8601")->required();
    fetch->add_option("--out", fetch_out, "export directory")->required();
    fetch->add_option("--base-url", base_url, "API base URL override");

    auto* synth = app.add_subcommand(
        "synth", "generate a deterministic synthetic dataset");
    std::string scenario_name, synth_out;
    std::uint64_t seed = 0;
    synth->add_option("--scenario", scenario_name, "decoupled|floater|planted|desk")
        ->required();
    synth->add_option("--out", synth_out, "export directory")->required();
    auto* seed_opt = synth->add_option("--seed", seed, "scenario seed override");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }

    try {
        if (!config_path.empty()) {
            // Re-parse so explicit flags win over config file values.
            RunConfig from_file;
            apply_config_file(config_path, from_file);
            cfg = from_file;
            try {
                app.clear();
                app.parse(argc, argv);
            } catch (const CLI::ParseError& e) {
                std::cerr << e.what() << "\n";
                return 1;
            }
        }
        if (keydevs->parsed()) return cmd_keydevs(cfg);
        if (coupling->parsed()) return cmd_coupling(cfg);
        if (report->parsed()) return cmd_report(report_in, cfg);
        if (aliases->parsed()) return cmd_suggest_aliases(cfg);
        if (fetch->parsed()) return cmd_fetch(repo, since, until, fetch_out, base_url);
        if (synth->parsed()) return cmd_synth(scenario_name, synth_out, seed, seed_opt->count() > 0);
    } catch (const TransientError& e) {
        std::cerr << "transient error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

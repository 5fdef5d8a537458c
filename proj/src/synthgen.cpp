#include "msmine/synthgen.hpp"

#include "msmine/coupling.hpp"
#include "msmine/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <random>

namespace msmine {

namespace {

std::string synth_sha(long counter) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%040lx", counter);
    return buf;
}

std::string service_file(const std::string& svc, int index) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "f%03d.ts", index);
    return "services/" + svc + "/" + buf;
}

long bounded(std::mt19937_64& rng, long lo, long hi) {
    // rng() % range keeps output identical across standard libraries.
    return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

} // namespace

void Scenario::validate() const {
    if (services.empty()) throw ValidationError("scenario has no services");
    std::set<std::string> known(services.begin(), services.end());
    for (const auto& [dev, svcs] : teams) {
        for (const auto& s : svcs) {
            if (!known.count(s)) {
                throw ValidationError("team of '" + dev + "' references unknown service '" + s + "'");
            }
        }
    }
    for (const auto& f : floaters) {
        if (!known.count(f.service_a) || !known.count(f.service_b)) {
            throw ValidationError("floater '" + f.dev + "' references unknown service");
        }
        if (f.service_a == f.service_b) {
            throw ValidationError("floater '" + f.dev + "' needs two distinct services");
        }
        if (f.commits < 1) throw ValidationError("floater needs >= 1 commits");
    }
    if (loc_min < 0 || loc_max < loc_min) throw ValidationError("bad loc range");
    if (files_per_service < 1) throw ValidationError("files_per_service must be >= 1");
    if (changes_min < 1 || changes_max < changes_min) {
        throw ValidationError("bad changes-per-commit range");
    }
    if (issue_link_probability < 0.0 || issue_link_probability > 1.0) {
        throw ValidationError("issue_link_probability outside [0, 1]");
    }
}

ServiceMap scenario_service_map(const Scenario& scenario) {
    ServiceMap map;
    for (const auto& svc : scenario.services) {
        map.entries.emplace_back("services/" + svc, svc);
    }
    map.validate();
    return map;
}

std::pair<ActivityLog, GroundTruth> generate(const Scenario& scenario) {
    scenario.validate();
    std::mt19937_64 rng(scenario.seed);
    GroundTruth truth;
    std::vector<RawCommit> commits;
    std::vector<IssueEvent> issues;
    long sha_counter = 0;

    const double span = scenario.window_days;
    long planned = 0;
    for (const auto& [dev, svcs] : scenario.teams) {
        planned += static_cast<long>(svcs.size()) * scenario.commits_per_dev;
    }
    for (const auto& f : scenario.floaters) planned += f.commits;
    if (scenario.planted_keydev) planned += 6;
    const Instant step = std::max<Instant>(
        1, static_cast<Instant>(span * kSecondsPerDay) / (planned + 2));
    long slot = 0;
    auto next_time = [&] { return scenario.window_end - (++slot) * step; };

    auto push_commit = [&](const std::string& dev, Instant t,
                           std::vector<FileChange> changes) {
        RawCommit c;
        c.sha = synth_sha(sha_counter++);
        c.author_email = dev;
        c.author_name = dev;
        c.timestamp = t;
        c.changes = std::move(changes);
        commits.push_back(std::move(c));
    };

    // Exclusive team developers.
    for (const auto& [dev, svcs] : scenario.teams) {
        for (const auto& svc : svcs) {
            for (int i = 0; i < scenario.commits_per_dev; ++i) {
                const long nfiles =
                    bounded(rng, scenario.changes_min,
                            std::min(scenario.changes_max, scenario.files_per_service));
                std::vector<FileChange> changes;
                for (long f = 0; f < nfiles; ++f) {
                    const int idx = static_cast<int>(
                        bounded(rng, 0, scenario.files_per_service - 1));
                    changes.push_back({service_file(svc, idx), FileAction::Modify,
                                       bounded(rng, scenario.loc_min, scenario.loc_max)});
                }
                push_commit(dev, next_time(), std::move(changes));
            }
        }
        truth.expected_per_dev_oc[dev] = 0.0;
    }

    // Floaters: strict A,B,A,B... alternation, analytic expectations
    // recorded while generating.
    for (const auto& f : scenario.floaters) {
        long sum_a = 0, sum_b = 0;
        // Times must descend per the grid, so emit newest-last via a
        // pre-reserved slot range.
        std::vector<Instant> times;
        for (int i = 0; i < f.commits; ++i) times.push_back(next_time());
        std::sort(times.begin(), times.end());
        for (int i = 0; i < f.commits; ++i) {
            const bool to_a = i % 2 == 0;
            const std::string& svc = to_a ? f.service_a : f.service_b;
            (to_a ? sum_a : sum_b) += f.loc_per_commit;
            push_commit(f.dev, times[static_cast<std::size_t>(i)],
                        {{service_file(svc, 0), FileAction::Modify, f.loc_per_commit}});
        }
        SwitchTruth st;
        st.dev = f.dev;
        st.service_a = f.service_a;
        st.service_b = f.service_b;
        st.n = f.commits;
        st.k = f.commits - 1;
        st.s = st.n >= 2 ? static_cast<double>(st.k) / (2.0 * static_cast<double>(st.n - 1))
                         : 0.0;
        st.oc = (sum_a + sum_b) > 0
                    ? 2.0 * static_cast<double>(sum_a) * static_cast<double>(sum_b) /
                          static_cast<double>(sum_a + sum_b) * st.s
                    : 0.0;
        truth.floaters.push_back(st);
        truth.expected_per_dev_oc[f.dev] += st.oc;
        truth.expected_total_oc += st.oc;
    }

    if (scenario.planted_keydev) {
        const std::string& alpha = scenario.services.front();
        const Instant at_end = scenario.window_end;
        const Instant mid = scenario.window_end -
                            static_cast<Instant>(scenario.window_days / 2.0 * kSecondsPerDay);
        auto file = [&](int i) { return service_file(alpha, i); };
        std::vector<FileChange> broad;
        for (int i = 1; i <= 8; ++i) broad.push_back({file(i), FileAction::Modify, 10});
        push_commit("jack@synth", at_end, std::move(broad));
        std::vector<FileChange> helper;
        for (int i = 2; i <= 8; ++i) helper.push_back({file(i), FileAction::Modify, 10});
        push_commit("helper@synth", mid, std::move(helper));
        push_commit("connector@synth", mid, {{file(1), FileAction::Modify, 5}});
        push_commit("connector@synth", mid, {{file(11), FileAction::Modify, 5}});
        push_commit("maven@synth", at_end,
                    {{file(9), FileAction::Modify, 10},
                     {file(10), FileAction::Modify, 10},
                     {file(11), FileAction::Modify, 10}});
        if (scenario.services.size() > 1) {
            push_commit("bystander@synth", at_end,
                        {{service_file(scenario.services[1], 0), FileAction::Modify, 10}});
        }
        truth.expected_jack[alpha] = "jack@synth";
        truth.expected_maven[alpha] = "maven@synth";
        truth.expected_connector[alpha] = "connector@synth";
    }

    // Issues: opened by a random developer, optionally linked to a commit.
    if (scenario.issue_count > 0) {
        std::vector<std::string> devs;
        for (const auto& c : commits) devs.push_back(c.author_email);
        std::sort(devs.begin(), devs.end());
        devs.erase(std::unique(devs.begin(), devs.end()), devs.end());
        const Instant span_s = static_cast<Instant>(span * kSecondsPerDay);
        for (int i = 0; i < scenario.issue_count; ++i) {
            const long id = i + 1;
            const Instant t = scenario.window_end - bounded(rng, 1, std::max<Instant>(2, span_s - 1));
            const std::string& actor =
                devs[static_cast<std::size_t>(bounded(rng, 0, static_cast<long>(devs.size()) - 1))];
            issues.push_back({id, actor, t, IssueEventKind::Opened, std::nullopt});
            const double roll = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            if (roll < scenario.issue_link_probability && !commits.empty()) {
                const auto& c = commits[static_cast<std::size_t>(
                    bounded(rng, 0, static_cast<long>(commits.size()) - 1))];
                issues.push_back({id, c.author_email, std::min(scenario.window_end, t + 3600),
                                  IssueEventKind::CommitLinked, c.sha});
            }
        }
    }

    return {make_activity_log(std::move(commits), std::move(issues)), truth};
}

Scenario decoupled_scenario() {
    Scenario s;
    s.seed = 11;
    s.window_end = parse_instant("2024-11-21T00:00:00Z");
    s.services = {"audit", "chat", "search"};
    s.teams = {{"ann@synth", {"audit"}},
               {"bob@synth", {"chat"}},
               {"cyd@synth", {"search"}}};
    s.commits_per_dev = 8;
    return s;
}

Scenario floater_scenario() {
    Scenario s;
    s.seed = 23;
    s.window_end = parse_instant("2024-11-21T00:00:00Z");
    s.services = {"audit", "chat"};
    s.teams = {{"ann@synth", {"audit"}}, {"bob@synth", {"chat"}}};
    s.commits_per_dev = 6;
    s.floaters = {{"flo@synth", "audit", "chat", 10, 10}};
    return s;
}

Scenario planted_keydev_scenario() {
    Scenario s;
    s.seed = 37;
    s.window_end = parse_instant("2024-11-21T00:00:00Z");
    s.services = {"alpha", "beta"};
    s.planted_keydev = true;
    return s;
}

Scenario desk_scale_scenario() {
    Scenario s;
    s.seed = 71;
    s.window_end = parse_instant("2024-11-21T00:00:00Z");
    s.window_days = 1656.0;  // 2020-05-13 .. 2024-11-21
    for (int i = 1; i <= 16; ++i) {
        char name[16];
        std::snprintf(name, sizeof name, "svc%02d", i);
        s.services.emplace_back(name);
    }
    for (int d = 0; d < 60; ++d) {
        char dev[32];
        std::snprintf(dev, sizeof dev, "dev%02d@synth", d);
        std::set<std::string> svcs = {s.services[static_cast<std::size_t>(d % 16)]};
        if (d % 3 == 0) svcs.insert(s.services[static_cast<std::size_t>((d + 7) % 16)]);
        s.teams[dev] = svcs;
    }
    s.commits_per_dev = 17;  // ~1360 commits over all team/service slots
    s.files_per_service = 120;
    s.changes_min = 12;  // ~25k change records overall
    s.changes_max = 25;
    s.loc_min = 1;
    s.loc_max = 200;
    s.issue_count = 2194;
    s.issue_link_probability = 0.3;
    return s;
}

} // namespace msmine

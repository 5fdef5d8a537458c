#pragma once

#include "msmine/ingest.hpp"
#include "msmine/graph.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace msmine {

/// One developer alternating between two services on a fixed pattern.
struct FloaterSpec {
    std::string dev;
    std::string service_a;
    std::string service_b;
    int commits = 10;
    long loc_per_commit = 10;
};

/// Deterministic synthetic activity with planted ground truth.
struct Scenario {
    std::uint64_t seed = 0;
    Instant window_end = 0;
    double window_days = 365.0;
    std::vector<std::string> services;
    std::map<std::string, std::set<std::string>> teams;  // dev -> exclusive services
    int commits_per_dev = 10;
    long loc_min = 5;
    long loc_max = 50;
    int files_per_service = 8;
    int changes_min = 1;
    int changes_max = 3;
    std::vector<FloaterSpec> floaters;
    int issue_count = 0;
    double issue_link_probability = 0.0;
    // Plants jack/maven/connector/helper structure in services.front().
    bool planted_keydev = false;

    void validate() const;
};

struct SwitchTruth {
    std::string dev;
    std::string service_a;
    std::string service_b;
    long k = 0;
    long n = 0;
    double s = 0.0;
    double oc = 0.0;
};

struct GroundTruth {
    // service -> expected top-1 developer for the metric.
    std::map<std::string, std::string> expected_jack;
    std::map<std::string, std::string> expected_maven;
    std::map<std::string, std::string> expected_connector;
    std::vector<SwitchTruth> floaters;
    std::map<std::string, double> expected_per_dev_oc;
    double expected_total_oc = 0.0;
};

std::pair<ActivityLog, GroundTruth> generate(const Scenario& scenario);

ServiceMap scenario_service_map(const Scenario& scenario);

// Canned scenarios used by the test and acceptance suites.
Scenario decoupled_scenario();
Scenario floater_scenario();
Scenario planted_keydev_scenario();
/// Sized like a small production monorepo: 16 services, ~1331 commits,
/// ~2194 issues, ~25k file-change records over 4.5 years.
Scenario desk_scale_scenario();

} // namespace msmine

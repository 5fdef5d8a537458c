#pragma once

#include "msmine/ingest.hpp"
#include "msmine/time.hpp"

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace msmine {

/// Trailing analysis window: [end - length_days, end], with events at
/// days_passed = length_days excluded (Eq.-1 singularity).
struct WindowSpec {
    Instant end = 0;
    double length_days = 365.0;

    Instant start() const {
        return end - static_cast<Instant>(length_days * kSecondsPerDay);
    }
    bool contains(Instant t) const {
        const double days_passed = days_between(t, end);
        return days_passed >= 0.0 && days_passed < length_days;
    }
};

/// Recency-based edge length: 1 / (1 - days_passed / length_days).
/// Equals 1 at the window end and grows toward the window start.
double edge_distance(Instant event_time, const WindowSpec& window);

/// Path-prefix -> microservice name, longest-prefix match.
struct ServiceMap {
    std::vector<std::pair<std::string, std::string>> entries;  // (prefix, service)

    void validate() const;
    std::optional<std::string> lookup(const std::string& path) const;
    std::vector<std::string> services() const;  // unique, sorted

    static ServiceMap load(const std::string& path);
};

enum class NodeKind { Developer, Commit, Issue, File };

std::string node_kind_name(NodeKind k);

struct NodeRef {
    NodeKind kind;
    std::string id;

    auto operator<=>(const NodeRef&) const = default;
};

/// Undirected weighted graph over developer/commit/issue/file nodes.
/// Parallel edges collapse to the minimum distance; isolated nodes are
/// never materialized. Immutable once built.
struct ArtifactGraph {
    std::vector<NodeRef> nodes;
    std::map<NodeRef, int> index;
    // Key is (min(a,b), max(a,b)) by node index; value is the collapsed distance.
    std::map<std::pair<int, int>, double> edges;

    struct Diagnostics {
        long dangling_issue_links = 0;
    } diagnostics;

    int add_node(const NodeRef& ref);
    void add_edge(const NodeRef& a, const NodeRef& b, double distance);

    std::optional<int> find(const NodeRef& ref) const;
    std::size_t node_count() const { return nodes.size(); }

    std::vector<int> nodes_of_kind(NodeKind kind) const;

    /// Adjacency lists, neighbor indices sorted ascending.
    std::vector<std::vector<std::pair<int, double>>> adjacency() const;

    /// Deterministic JSON dump (sorted node and edge lists) for debugging
    /// and oracle tests.
    std::string dump_json() const;
};

/// Restricts the log to one microservice: commits keep only changes whose
/// path resolves to the service (commits left with none are dropped);
/// issues survive iff they link at least one kept commit.
ActivityLog scope_to_service(const ActivityLog& log, const ServiceMap& map,
                             const std::string& service);

ArtifactGraph build_graph(const ActivityLog& log, const WindowSpec& window);

struct AnalysisConfig {
    double distance_threshold = 5.0;
    int rare_reach_limit = 1;
    double window_length_days = 365.0;
    int top_k = 3;
    bool mask_ids = true;
    bool connector_hop_count = false;  // unit edge weights for betweenness

    void validate() const;
};

} // namespace msmine

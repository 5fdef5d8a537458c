#include "msmine/graph.hpp"

#include "msmine/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

using nlohmann::json;

namespace msmine {

double edge_distance(Instant event_time, const WindowSpec& window) {
    const double days_passed = days_between(event_time, window.end);
    if (days_passed < 0.0 || days_passed >= window.length_days) {
        throw ArgumentError("event at " + format_instant(event_time) +
                            " outside window ending " + format_instant(window.end));
    }
    return 1.0 / (1.0 - days_passed / window.length_days);
}

void ServiceMap::validate() const {
    std::unordered_set<std::string> prefixes;
    for (const auto& [prefix, service] : entries) {
        if (prefix.empty()) throw ValidationError("empty service prefix");
        if (service.empty()) throw ValidationError("empty service name");
        if (!prefixes.insert(prefix).second) {
            throw ValidationError("duplicate service prefix '" + prefix + "'");
        }
    }
}

std::optional<std::string> ServiceMap::lookup(const std::string& path) const {
    const std::string* best = nullptr;
    std::size_t best_len = 0;
    for (const auto& [prefix, service] : entries) {
        if (path.size() < prefix.size()) continue;
        if (path.compare(0, prefix.size(), prefix) != 0) continue;
        // Directory boundary: "services/audit" must not match "services/audit2".
        if (path.size() > prefix.size() && prefix.back() != '/' &&
            path[prefix.size()] != '/') {
            continue;
        }
        if (prefix.size() >= best_len) {
            if (prefix.size() == best_len && best && service >= *best) continue;
            best = &service;
            best_len = prefix.size();
        }
    }
    if (!best) return std::nullopt;
    return *best;
}

std::vector<std::string> ServiceMap::services() const {
    std::vector<std::string> out;
    for (const auto& [prefix, service] : entries) out.push_back(service);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

ServiceMap ServiceMap::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open service map '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(std::string("service map: ") + e.what());
    }
    ServiceMap map;
    for (auto it = j.begin(); it != j.end(); ++it) {
        map.entries.emplace_back(it.key(), it.value().get<std::string>());
    }
    map.validate();
    return map;
}

std::string node_kind_name(NodeKind k) {
    switch (k) {
        case NodeKind::Developer: return "developer";
        case NodeKind::Commit: return "commit";
        case NodeKind::Issue: return "issue";
        case NodeKind::File: return "file";
    }
    return "?";
}

int ArtifactGraph::add_node(const NodeRef& ref) {
    auto [it, inserted] = index.try_emplace(ref, static_cast<int>(nodes.size()));
    if (inserted) nodes.push_back(ref);
    return it->second;
}

void ArtifactGraph::add_edge(const NodeRef& a, const NodeRef& b, double distance) {
    const int ia = add_node(a);
    const int ib = add_node(b);
    auto key = std::minmax(ia, ib);
    auto [it, inserted] = edges.try_emplace({key.first, key.second}, distance);
    if (!inserted && distance < it->second) it->second = distance;
}

std::optional<int> ArtifactGraph::find(const NodeRef& ref) const {
    auto it = index.find(ref);
    if (it == index.end()) return std::nullopt;
    return it->second;
}

std::vector<int> ArtifactGraph::nodes_of_kind(NodeKind kind) const {
    std::vector<int> out;
    for (const auto& [ref, idx] : index) {
        if (ref.kind == kind) out.push_back(idx);
    }
    return out;
}

std::vector<std::vector<std::pair<int, double>>> ArtifactGraph::adjacency() const {
    std::vector<std::vector<std::pair<int, double>>> adj(nodes.size());
    for (const auto& [key, dist] : edges) {
        adj[key.first].emplace_back(key.second, dist);
        adj[key.second].emplace_back(key.first, dist);
    }
    for (auto& nbrs : adj) std::sort(nbrs.begin(), nbrs.end());
    return adj;
}

std::string ArtifactGraph::dump_json() const {
    json jnodes = json::array();
    for (const auto& [ref, idx] : index) {
        jnodes.push_back({{"kind", node_kind_name(ref.kind)}, {"id", ref.id}});
    }
    json jedges = json::array();
    for (const auto& [key, dist] : edges) {
        const NodeRef& a = nodes[key.first];
        const NodeRef& b = nodes[key.second];
        jedges.push_back({{"a_kind", node_kind_name(a.kind)},
                          {"a_id", a.id},
                          {"b_kind", node_kind_name(b.kind)},
                          {"b_id", b.id},
                          {"distance", dist}});
    }
    // Edge order follows the sorted node index map, already deterministic.
    json j = {{"nodes", jnodes}, {"edges", jedges}};
    return j.dump(2);
}

ActivityLog scope_to_service(const ActivityLog& log, const ServiceMap& map,
                             const std::string& service) {
    const auto known = map.services();
    if (std::find(known.begin(), known.end(), service) == known.end()) {
        throw ArgumentError("unknown service '" + service + "'");
    }

    std::vector<RawCommit> commits;
    std::unordered_set<std::string> kept_shas;
    for (const auto& c : log.commits) {
        RawCommit kept = c;
        kept.changes.clear();
        for (const auto& fc : c.changes) {
            auto svc = map.lookup(fc.path);
            if (svc && *svc == service) kept.changes.push_back(fc);
        }
        if (!kept.changes.empty()) {
            kept_shas.insert(kept.sha);
            commits.push_back(std::move(kept));
        }
    }

    std::unordered_set<long> kept_issues;
    for (const auto& ev : log.issues) {
        if (ev.kind == IssueEventKind::CommitLinked && ev.linked_sha &&
            kept_shas.count(*ev.linked_sha)) {
            kept_issues.insert(ev.issue_id);
        }
    }
    std::vector<IssueEvent> issues;
    for (const auto& ev : log.issues) {
        if (kept_issues.count(ev.issue_id)) issues.push_back(ev);
    }
    return make_activity_log(std::move(commits), std::move(issues));
}

ArtifactGraph build_graph(const ActivityLog& log, const WindowSpec& window) {
    ArtifactGraph g;
    std::unordered_map<std::string, Instant> in_window_commits;
    for (const auto& c : log.commits) {
        if (!window.contains(c.timestamp)) continue;
        in_window_commits.emplace(c.sha, c.timestamp);
        const double d = edge_distance(c.timestamp, window);
        const NodeRef commit{NodeKind::Commit, c.sha};
        g.add_edge({NodeKind::Developer, c.author_email}, commit, d);
        for (const auto& fc : c.changes) {
            g.add_edge(commit, {NodeKind::File, fc.path}, d);
        }
    }
    for (const auto& ev : log.issues) {
        if (!window.contains(ev.timestamp)) continue;
        const double d = edge_distance(ev.timestamp, window);
        const NodeRef issue{NodeKind::Issue, std::to_string(ev.issue_id)};
        g.add_edge({NodeKind::Developer, ev.actor_email}, issue, d);
        if (ev.kind == IssueEventKind::CommitLinked && ev.linked_sha) {
            if (in_window_commits.count(*ev.linked_sha)) {
                g.add_edge(issue, {NodeKind::Commit, *ev.linked_sha}, d);
            } else {
                ++g.diagnostics.dangling_issue_links;
            }
        }
    }
    return g;
}

void AnalysisConfig::validate() const {
    if (distance_threshold <= 0) throw ArgumentError("distance_threshold must be > 0");
    if (rare_reach_limit < 1) throw ArgumentError("rare_reach_limit must be >= 1");
    if (window_length_days <= 0) throw ArgumentError("window_length_days must be > 0");
    if (top_k < 1) throw ArgumentError("top_k must be >= 1");
}

} // namespace msmine

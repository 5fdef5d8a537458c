#pragma once

// Independent brute-force oracles. These deliberately avoid the library's
// Dijkstra/Brandes code paths: everything here enumerates simple paths.

#include "msmine/coupling.hpp"
#include "msmine/graph.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace msmine::test {

inline constexpr double kOracleEps = 1e-9;

struct PathEnumerator {
    const std::vector<std::vector<std::pair<int, double>>>& adj;
    std::vector<char> blocked;  // nodes that may not appear on any path

    // Minimum simple-path distance from s to every node, avoiding blocked
    // nodes (s itself is always allowed).
    std::vector<double> min_dists(int s) const {
        std::vector<double> best(adj.size(), std::numeric_limits<double>::infinity());
        std::vector<char> on_path(adj.size(), 0);
        best[s] = 0.0;
        dfs_min(s, 0.0, on_path, best);
        return best;
    }

    // All-pairs shortest-path counting: for pair (s, t), paths of minimal
    // length and the number of them passing through each interior node.
    struct PairCount {
        double dist = std::numeric_limits<double>::infinity();
        double sigma = 0.0;
        std::vector<double> through;  // sigma restricted to paths via node v
    };

    PairCount count_pair(int s, int t) const {
        PairCount pc;
        pc.through.assign(adj.size(), 0.0);
        std::vector<int> path = {s};
        std::vector<char> on_path(adj.size(), 0);
        on_path[s] = 1;
        dfs_count(s, t, 0.0, path, on_path, pc);
        return pc;
    }

  private:
    void dfs_min(int u, double d, std::vector<char>& on_path,
                 std::vector<double>& best) const {
        on_path[u] = 1;
        for (const auto& [v, w] : adj[u]) {
            if (on_path[v] || blocked[v]) continue;
            const double nd = d + w;
            if (nd < best[v]) best[v] = nd;
            dfs_min(v, nd, on_path, best);
        }
        on_path[u] = 0;
    }

    void dfs_count(int u, int t, double d, std::vector<int>& path,
                   std::vector<char>& on_path, PairCount& pc) const {
        if (u == t) {
            if (d < pc.dist - kOracleEps) {
                pc.dist = d;
                pc.sigma = 1.0;
                std::fill(pc.through.begin(), pc.through.end(), 0.0);
                for (std::size_t i = 1; i + 1 < path.size(); ++i)
                    pc.through[path[i]] += 1.0;
            } else if (std::abs(d - pc.dist) <= kOracleEps) {
                pc.sigma += 1.0;
                for (std::size_t i = 1; i + 1 < path.size(); ++i)
                    pc.through[path[i]] += 1.0;
            }
            return;
        }
        for (const auto& [v, w] : adj[u]) {
            if (on_path[v] || blocked[v]) continue;
            on_path[v] = 1;
            path.push_back(v);
            dfs_count(v, t, d + w, path, on_path, pc);
            path.pop_back();
            on_path[v] = 0;
        }
    }
};

// Files within threshold of the developer with every other developer removed.
inline std::set<std::string> brute_reachable(const ArtifactGraph& graph,
                                             const std::string& developer,
                                             double threshold) {
    const auto adj = graph.adjacency();
    const int dev = *graph.find({NodeKind::Developer, developer});
    std::vector<char> blocked(graph.node_count(), 0);
    for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
        if (graph.nodes[i].kind == NodeKind::Developer &&
            static_cast<int>(i) != dev) {
            blocked[i] = 1;
        }
    }
    PathEnumerator pe{adj, blocked};
    const auto dists = pe.min_dists(dev);
    std::set<std::string> files;
    for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
        if (graph.nodes[i].kind == NodeKind::File &&
            dists[i] <= threshold + kOracleEps) {
            files.insert(graph.nodes[i].id);
        }
    }
    return files;
}

// Normalized betweenness by exhaustive simple-path enumeration.
inline std::map<std::string, double> brute_betweenness(const ArtifactGraph& graph) {
    const auto adj = graph.adjacency();
    const std::size_t n = graph.node_count();
    std::vector<char> blocked(n, 0);
    PathEnumerator pe{adj, blocked};
    std::vector<double> bc(n, 0.0);
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t t = s + 1; t < n; ++t) {
            const auto pc = pe.count_pair(static_cast<int>(s), static_cast<int>(t));
            if (pc.sigma == 0.0) continue;
            for (std::size_t v = 0; v < n; ++v) bc[v] += pc.through[v] / pc.sigma;
        }
    }
    const double dn = static_cast<double>(n);
    const double divisor = (dn - 1.0) * (dn - 2.0) / 2.0;
    std::map<std::string, double> out;
    for (std::size_t i = 0; i < n; ++i) {
        if (graph.nodes[i].kind == NodeKind::Developer) {
            out[graph.nodes[i].id] = bc[i] / divisor;
        }
    }
    return out;
}

// Switch counting restated: twice the AB count, plus one for each adjacent
// opposite pair in the single-label subsequence not straddling an AB commit.
inline long naive_switch_count(const std::vector<CommitLabel>& labels) {
    long k = 0;
    for (auto l : labels) {
        if (l == CommitLabel::AB) k += 2;
    }
    long prev_single = -1;  // index of the latest single-label commit seen
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == CommitLabel::AB) continue;
        if (prev_single >= 0 && labels[static_cast<std::size_t>(prev_single)] != labels[i]) {
            bool straddles_ab = false;
            for (long j = prev_single + 1; j < static_cast<long>(i); ++j) {
                if (labels[static_cast<std::size_t>(j)] == CommitLabel::AB) {
                    straddles_ab = true;
                    break;
                }
            }
            if (!straddles_ab) ++k;
        }
        prev_single = static_cast<long>(i);
    }
    return k;
}

// Random legal fixture graph with at most max_nodes nodes.
inline ArtifactGraph random_fixture_graph(std::mt19937_64& rng, int max_nodes = 12) {
    auto pick = [&](int lo, int hi) {
        return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
    };
    ArtifactGraph g;
    const int devs = pick(1, 3);
    const int commits = pick(1, 4);
    const int files = pick(1, 4);
    const int issues = pick(0, std::max(0, max_nodes - devs - commits - files));
    auto dist = [&] { return 1.0 + 0.5 * pick(0, 4); };
    auto dev_ref = [&](int i) { return NodeRef{NodeKind::Developer, "d" + std::to_string(i)}; };
    auto commit_ref = [&](int i) { return NodeRef{NodeKind::Commit, std::string(40, static_cast<char>('a' + i))}; };
    auto file_ref = [&](int i) { return NodeRef{NodeKind::File, "f" + std::to_string(i)}; };
    for (int c = 0; c < commits; ++c) {
        g.add_edge(dev_ref(pick(0, devs - 1)), commit_ref(c), dist());
        const int nf = pick(1, files);
        for (int j = 0; j < nf; ++j) {
            g.add_edge(commit_ref(c), file_ref(pick(0, files - 1)), dist());
        }
    }
    for (int i = 0; i < issues; ++i) {
        const NodeRef issue{NodeKind::Issue, std::to_string(i + 1)};
        g.add_edge(dev_ref(pick(0, devs - 1)), issue, dist());
        if (pick(0, 1) == 1) {
            g.add_edge(issue, commit_ref(pick(0, commits - 1)), dist());
        }
    }
    return g;
}

} // namespace msmine::test

#include "msmine/keydev.hpp"

#include "msmine/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <thread>

namespace msmine {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = 1e-10;  // shortest-path tie tolerance

using Adjacency = std::vector<std::vector<std::pair<int, double>>>;

// Dijkstra from `source`, skipping nodes marked excluded.
std::vector<double> dijkstra(const Adjacency& adj, int source,
                             const std::vector<char>& excluded) {
    std::vector<double> dist(adj.size(), kInf);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[source] = 0.0;
    pq.push({0.0, source});
    while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (d > dist[u]) continue;
        for (const auto& [v, w] : adj[u]) {
            if (excluded[v]) continue;
            const double nd = d + w;
            if (nd < dist[v]) {
                dist[v] = nd;
                pq.push({nd, v});
            }
        }
    }
    return dist;
}

struct DevIndex {
    std::vector<int> devs;        // developer node indices, id-sorted
    std::vector<char> is_dev;     // per node
};

DevIndex developer_index(const ArtifactGraph& graph) {
    DevIndex di;
    di.is_dev.assign(graph.node_count(), 0);
    for (const auto& [ref, idx] : graph.index) {
        if (ref.kind == NodeKind::Developer) {
            di.devs.push_back(idx);
            di.is_dev[idx] = 1;
        }
    }
    return di;
}

std::set<std::string> reach_from(const ArtifactGraph& graph, const Adjacency& adj,
                                 const DevIndex& di, int dev_idx, double threshold) {
    std::vector<char> excluded = di.is_dev;
    excluded[dev_idx] = 0;  // only OTHER developers block paths
    const auto dist = dijkstra(adj, dev_idx, excluded);
    std::set<std::string> files;
    for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
        if (graph.nodes[i].kind == NodeKind::File &&
            dist[i] <= threshold + kEps) {
            files.insert(graph.nodes[i].id);
        }
    }
    return files;
}

// Reachable file sets for every developer, id-sorted, computed in parallel
// over a fixed chunking for run-to-run determinism.
std::vector<std::pair<std::string, std::set<std::string>>>
all_reach(const ArtifactGraph& graph, double threshold) {
    const auto adj = graph.adjacency();
    const auto di = developer_index(graph);
    std::vector<std::pair<std::string, std::set<std::string>>> out(di.devs.size());
    const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= di.devs.size()) return;
            const int idx = di.devs[i];
            out[i] = {graph.nodes[idx].id,
                      reach_from(graph, adj, di, idx, threshold)};
        }
    };
    if (di.devs.size() > 1 && workers > 1) {
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    } else {
        work();
    }
    return out;
}

} // namespace

std::string metric_name(Metric m) {
    switch (m) {
        case Metric::Jack: return "jack";
        case Metric::Maven: return "maven";
        case Metric::Connector: return "connector";
    }
    return "?";
}

Metric parse_metric(const std::string& s) {
    if (s == "jack") return Metric::Jack;
    if (s == "maven") return Metric::Maven;
    if (s == "connector") return Metric::Connector;
    throw ArgumentError("unknown metric '" + s + "'");
}

std::vector<KeyDevScore> rank_scores(std::vector<KeyDevScore> scores) {
    std::sort(scores.begin(), scores.end(),
              [](const KeyDevScore& a, const KeyDevScore& b) {
                  if (a.score != b.score) return a.score > b.score;
                  return a.developer < b.developer;
              });
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (i > 0 && scores[i].score == scores[i - 1].score) {
            scores[i].rank = scores[i - 1].rank;
        } else {
            scores[i].rank = static_cast<int>(i) + 1;
        }
    }
    return scores;
}

std::vector<KeyDevScore> top_k(const std::vector<KeyDevScore>& scores, int k) {
    if (k < 1) throw ArgumentError("k must be >= 1");
    const std::size_t n = std::min<std::size_t>(scores.size(), static_cast<std::size_t>(k));
    return {scores.begin(), scores.begin() + static_cast<std::ptrdiff_t>(n)};
}

ReachabilityResult reachable_files(const ArtifactGraph& graph,
                                   const std::string& developer,
                                   double threshold) {
    const auto idx = graph.find({NodeKind::Developer, developer});
    if (!idx) throw ArgumentError("unknown developer '" + developer + "'");
    const auto adj = graph.adjacency();
    const auto di = developer_index(graph);
    return {developer, reach_from(graph, adj, di, *idx, threshold)};
}

std::vector<KeyDevScore> jack_scores(const ArtifactGraph& graph,
                                     const AnalysisConfig& config) {
    config.validate();
    const auto files = graph.nodes_of_kind(NodeKind::File);
    if (files.empty()) throw EmptyDomainError("graph has no File nodes");
    const double total = static_cast<double>(files.size());
    std::vector<KeyDevScore> scores;
    for (auto& [dev, reach] : all_reach(graph, config.distance_threshold)) {
        scores.push_back({dev, Metric::Jack,
                          static_cast<double>(reach.size()) / total, 0});
    }
    return rank_scores(std::move(scores));
}

std::set<std::string> rarely_reached_files(const ArtifactGraph& graph,
                                           const AnalysisConfig& config) {
    config.validate();
    std::map<std::string, int> counts;
    for (const auto& [dev, reach] : all_reach(graph, config.distance_threshold)) {
        for (const auto& f : reach) ++counts[f];
    }
    std::set<std::string> rare;
    for (const auto& [f, c] : counts) {
        if (c >= 1 && c <= config.rare_reach_limit) rare.insert(f);
    }
    return rare;
}

std::vector<KeyDevScore> maven_scores(const ArtifactGraph& graph,
                                      const AnalysisConfig& config) {
    config.validate();
    const auto reach = all_reach(graph, config.distance_threshold);
    std::map<std::string, int> counts;
    for (const auto& [dev, files] : reach) {
        for (const auto& f : files) ++counts[f];
    }
    std::set<std::string> rare;
    for (const auto& [f, c] : counts) {
        if (c >= 1 && c <= config.rare_reach_limit) rare.insert(f);
    }
    std::vector<KeyDevScore> scores;
    for (const auto& [dev, files] : reach) {
        double score = 0.0;
        if (!rare.empty()) {
            std::size_t owned = 0;
            for (const auto& f : files) owned += rare.count(f);
            score = static_cast<double>(owned) / static_cast<double>(rare.size());
        }
        scores.push_back({dev, Metric::Maven, score, 0});
    }
    return rank_scores(std::move(scores));
}

namespace {

// Brandes' accumulation from one source; returns per-node dependency.
std::vector<double> brandes_source(const Adjacency& adj, int s, bool unit_weights) {
    const std::size_t n = adj.size();
    std::vector<double> dist(n, kInf), sigma(n, 0.0), delta(n, 0.0);
    std::vector<std::vector<int>> preds(n);
    std::vector<int> settled;
    settled.reserve(n);

    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    std::vector<char> done(n, 0);
    dist[s] = 0.0;
    sigma[s] = 1.0;
    pq.push({0.0, s});
    while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (done[u]) continue;
        done[u] = 1;
        settled.push_back(u);
        for (const auto& [v, ew] : adj[u]) {
            const double w = unit_weights ? 1.0 : ew;
            const double nd = d + w;
            if (nd < dist[v] - kEps) {
                dist[v] = nd;
                sigma[v] = sigma[u];
                preds[v].assign(1, u);
                pq.push({nd, v});
            } else if (std::abs(nd - dist[v]) <= kEps && !done[v]) {
                sigma[v] += sigma[u];
                preds[v].push_back(u);
            }
        }
    }
    for (auto it = settled.rbegin(); it != settled.rend(); ++it) {
        const int w = *it;
        for (int v : preds[w]) {
            delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
        }
    }
    delta[s] = 0.0;
    return delta;
}

} // namespace

std::vector<KeyDevScore> connector_scores(const ArtifactGraph& graph,
                                          const AnalysisConfig& config) {
    config.validate();
    const std::size_t n = graph.node_count();
    if (n < 3) throw EmptyDomainError("graph too small for betweenness");
    const auto adj = graph.adjacency();

    // Fixed chunking keeps the floating-point reduction order independent
    // of the thread count.
    constexpr std::size_t kChunks = 64;
    const std::size_t chunk_size = (n + kChunks - 1) / kChunks;
    std::vector<std::vector<double>> partial(kChunks);
    const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c * chunk_size >= n) return;
            std::vector<double> acc(n, 0.0);
            const std::size_t lo = c * chunk_size;
            const std::size_t hi = std::min(n, lo + chunk_size);
            for (std::size_t s = lo; s < hi; ++s) {
                const auto delta = brandes_source(adj, static_cast<int>(s),
                                                  config.connector_hop_count);
                for (std::size_t i = 0; i < n; ++i) acc[i] += delta[i];
            }
            partial[c] = std::move(acc);
        }
    };
    if (workers > 1 && n > 16) {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    } else {
        work();
    }
    std::vector<double> bc(n, 0.0);
    for (const auto& acc : partial) {
        if (acc.empty()) continue;
        for (std::size_t i = 0; i < n; ++i) bc[i] += acc[i];
    }

    const double dn = static_cast<double>(n);
    const double divisor = (dn - 1.0) * (dn - 2.0) / 2.0;
    std::vector<KeyDevScore> scores;
    for (const auto& [ref, idx] : graph.index) {
        if (ref.kind != NodeKind::Developer) continue;
        // Undirected: each pair counted from both endpoints.
        double score = bc[idx] / 2.0 / divisor;
        if (score < 0.0) score = 0.0;
        scores.push_back({ref.id, Metric::Connector, score, 0});
    }
    return rank_scores(std::move(scores));
}

} // namespace msmine

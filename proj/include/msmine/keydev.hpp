#pragma once

#include "msmine/graph.hpp"

#include <set>
#include <string>
#include <vector>

namespace msmine {

enum class Metric { Jack, Maven, Connector };

std::string metric_name(Metric m);
Metric parse_metric(const std::string& s);

struct KeyDevScore {
    std::string developer;
    Metric metric = Metric::Jack;
    double score = 0.0;
    int rank = 0;  // 1-based; ties share the smaller rank
};

struct ReachabilityResult {
    std::string developer;
    std::set<std::string> reachable_files;
};

/// Files whose shortest-path distance from the developer is <= threshold,
/// computed with every other Developer node removed from the graph.
ReachabilityResult reachable_files(const ArtifactGraph& graph,
                                   const std::string& developer,
                                   double threshold);

/// File coverage ratio per developer: |reachable| / |all files|.
std::vector<KeyDevScore> jack_scores(const ArtifactGraph& graph,
                                     const AnalysisConfig& config);

/// Files reached by at least one and at most rare_reach_limit developers.
std::set<std::string> rarely_reached_files(const ArtifactGraph& graph,
                                           const AnalysisConfig& config);

/// Share of the rare-file set each developer reaches.
std::vector<KeyDevScore> maven_scores(const ArtifactGraph& graph,
                                      const AnalysisConfig& config);

/// Normalized weighted betweenness centrality over all graph nodes,
/// reported for Developer nodes only.
std::vector<KeyDevScore> connector_scores(const ArtifactGraph& graph,
                                          const AnalysisConfig& config);

std::vector<KeyDevScore> top_k(const std::vector<KeyDevScore>& scores, int k);

/// Sorts descending by score (ascending id on ties) and assigns
/// competition ranks.
std::vector<KeyDevScore> rank_scores(std::vector<KeyDevScore> scores);

} // namespace msmine

#pragma once

#include "msmine/coupling.hpp"
#include "msmine/keydev.hpp"

#include <map>
#include <string>
#include <vector>

namespace msmine {

enum class ReportFormat { Json, Csv, Markdown };

ReportFormat parse_format(const std::string& s);

struct ReportConfig {
    ReportFormat format = ReportFormat::Markdown;
    bool mask_ids = true;
    int top_k = 3;
    std::string output_path;  // empty = stdout
};

/// First min(3, len) characters + "XXX".
std::string mask_id(const std::string& id);

/// Banker's rounding to two decimals.
double round2(double v);

struct MetricLists {
    std::vector<KeyDevScore> jack;
    std::vector<KeyDevScore> maven;
    std::vector<KeyDevScore> connector;
};

struct KeyDevResults {
    std::map<std::string, MetricLists> per_service;
    MetricLists global;
    WindowSpec window;
};

/// One row per service plus a whole-project row; cells list
/// (masked-id, score) tuples in rank order. Byte-deterministic.
std::string render_keydev_table(const KeyDevResults& results,
                                const ReportConfig& cfg);

/// Rows = developers (union over windows), columns = windows, values to
/// two decimals (zero shown as 0); conservation footer row.
std::string render_coupling_table(const std::vector<CouplingMatrix>& windows,
                                  const ReportConfig& cfg);

/// Machine-readable result files, re-renderable via the `report` command.
std::string keydev_results_to_json(const KeyDevResults& results);
KeyDevResults keydev_results_from_json(const std::string& text);
std::string coupling_results_to_json(const std::vector<CouplingMatrix>& windows);
std::vector<CouplingMatrix> coupling_results_from_json(const std::string& text);

} // namespace msmine

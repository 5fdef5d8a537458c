#pragma once

#include "msmine/graph.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace msmine {

enum class CommitLabel { A, B, AB };

/// One of a developer's commits touching service a and/or b.
struct LabeledCommit {
    std::string sha;
    Instant timestamp = 0;
    CommitLabel label = CommitLabel::A;
    long contrib_a = 0;  // LOC toward service a
    long contrib_b = 0;
};

struct SwitchStats {
    std::string developer;
    std::string service_a;
    std::string service_b;
    long k = 0;  // switch count
    long n = 0;  // commit count
    double s = 0.0;
};

struct CouplingEntry {
    std::string developer;
    std::string service_a;
    std::string service_b;
    long sum_a = 0;
    long sum_b = 0;
    double oc = 0.0;
};

struct CouplingMatrix {
    std::vector<std::string> services;
    // Key is (a, b) with a < b lexicographically.
    std::map<std::pair<std::string, std::string>, double> cells;
    std::map<std::string, double> per_developer;
    std::vector<CouplingEntry> entries;
    WindowSpec window;
};

/// The developer's time-ordered commits touching a and/or b; contributions
/// are per-service LOC sums. Labels are touch-based, so a zero-LOC rename
/// still labels its service.
std::vector<LabeledCommit> label_commits(const ActivityLog& log,
                                         const std::string& dev,
                                         const ServiceMap& map,
                                         const std::string& a,
                                         const std::string& b);

/// Scan counting alternations; an AB commit adds two switches and absorbs
/// the running state. Returns (k, n).
std::pair<long, long> count_switches(const std::vector<LabeledCommit>& seq);

/// Eq.-2 ratio: k / (2(n-1)); defined as 0 for n <= 1.
double switch_ratio(long k, long n);

/// Eq.-3 coupling: harmonic mean of the two contribution sums times s.
double pair_coupling(long sum_a, long sum_b, double s);

/// Aggregates CouplingEntry values over every unordered service pair and
/// every developer active in the window.
CouplingMatrix coupling_matrix(const ActivityLog& log, const ServiceMap& map,
                               const WindowSpec& window);

/// Consecutive non-overlapping windows starting at `first`; each computed
/// independently (switch state does not carry across windows).
std::vector<CouplingMatrix> windowed_coupling(const ActivityLog& log,
                                              const ServiceMap& map,
                                              Instant first,
                                              double window_length_days,
                                              int count);

} // namespace msmine

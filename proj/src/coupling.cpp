#include "msmine/coupling.hpp"

#include "msmine/errors.hpp"

#include <algorithm>

namespace msmine {

std::vector<LabeledCommit> label_commits(const ActivityLog& log,
                                         const std::string& dev,
                                         const ServiceMap& map,
                                         const std::string& a,
                                         const std::string& b) {
    if (a == b) throw ArgumentError("service pair must be distinct");
    std::vector<LabeledCommit> out;
    for (const auto& c : log.commits) {
        if (c.author_email != dev) continue;
        bool touches_a = false, touches_b = false;
        long loc_a = 0, loc_b = 0;
        for (const auto& fc : c.changes) {
            auto svc = map.lookup(fc.path);
            if (!svc) continue;
            if (*svc == a) {
                touches_a = true;
                loc_a += fc.loc;
            } else if (*svc == b) {
                touches_b = true;
                loc_b += fc.loc;
            }
        }
        if (!touches_a && !touches_b) continue;
        LabeledCommit lc;
        lc.sha = c.sha;
        lc.timestamp = c.timestamp;
        lc.label = touches_a && touches_b ? CommitLabel::AB
                   : touches_a           ? CommitLabel::A
                                         : CommitLabel::B;
        lc.contrib_a = loc_a;
        lc.contrib_b = loc_b;
        out.push_back(std::move(lc));
    }
    // Log is already (timestamp, sha) ordered; commits preserve that order.
    return out;
}

std::pair<long, long> count_switches(const std::vector<LabeledCommit>& seq) {
    long k = 0;
    enum class State { None, A, B, AB } state = State::None;
    for (const auto& c : seq) {
        switch (c.label) {
            case CommitLabel::AB:
                k += 2;
                state = State::AB;
                break;
            case CommitLabel::A:
                if (state == State::B) ++k;
                state = State::A;
                break;
            case CommitLabel::B:
                if (state == State::A) ++k;
                state = State::B;
                break;
        }
    }
    return {k, static_cast<long>(seq.size())};
}

double switch_ratio(long k, long n) {
    if (n < 1) throw ArgumentError("switch_ratio requires n >= 1");
    if (k < 0) throw ArgumentError("switch_ratio requires k >= 0");
    if (n == 1) return 0.0;  // a single commit cannot alternate
    return static_cast<double>(k) / (2.0 * static_cast<double>(n - 1));
}

double pair_coupling(long sum_a, long sum_b, double s) {
    if (sum_a < 0 || sum_b < 0 || s < 0) {
        throw ArgumentError("pair_coupling inputs must be non-negative");
    }
    if (sum_a + sum_b == 0) return 0.0;
    const double a = static_cast<double>(sum_a);
    const double b = static_cast<double>(sum_b);
    return (2.0 * a * b / (a + b)) * s;
}

CouplingMatrix coupling_matrix(const ActivityLog& log, const ServiceMap& map,
                               const WindowSpec& window) {
    const auto services = map.services();
    if (services.size() < 2) {
        throw ArgumentError("coupling requires at least 2 services");
    }

    // Restrict to the window once; labels and switch state stay inside it.
    std::vector<RawCommit> in_window;
    for (const auto& c : log.commits) {
        if (window.contains(c.timestamp)) in_window.push_back(c);
    }
    ActivityLog windowed = make_activity_log(std::move(in_window), {});

    CouplingMatrix m;
    m.services = services;
    m.window = window;
    for (std::size_t i = 0; i < services.size(); ++i) {
        for (std::size_t j = i + 1; j < services.size(); ++j) {
            m.cells[{services[i], services[j]}] = 0.0;
        }
    }
    for (const auto& dev : windowed.developers) {
        for (std::size_t i = 0; i < services.size(); ++i) {
            for (std::size_t j = i + 1; j < services.size(); ++j) {
                const auto& a = services[i];
                const auto& b = services[j];
                auto seq = label_commits(windowed, dev, map, a, b);
                if (seq.empty()) continue;
                auto [k, n] = count_switches(seq);
                const double s = switch_ratio(k, n);
                long sum_a = 0, sum_b = 0;
                for (const auto& lc : seq) {
                    sum_a += lc.contrib_a;
                    sum_b += lc.contrib_b;
                }
                const double oc = pair_coupling(sum_a, sum_b, s);
                m.entries.push_back({dev, a, b, sum_a, sum_b, oc});
                m.cells[{a, b}] += oc;
                m.per_developer[dev] += oc;
            }
        }
    }
    return m;
}

std::vector<CouplingMatrix> windowed_coupling(const ActivityLog& log,
                                              const ServiceMap& map,
                                              Instant first,
                                              double window_length_days,
                                              int count) {
    if (count < 1) throw ArgumentError("window count must be >= 1");
    if (window_length_days <= 0) throw ArgumentError("window length must be > 0");
    std::vector<CouplingMatrix> out;
    const auto len = static_cast<Instant>(window_length_days * kSecondsPerDay);
    // WindowSpec is open at its start; anchor one second earlier so an
    // event exactly at `first` lands in the first window.
    const Instant anchor = first - 1;
    for (int i = 0; i < count; ++i) {
        WindowSpec w{anchor + static_cast<Instant>(i + 1) * len, window_length_days};
        out.push_back(coupling_matrix(log, map, w));
    }
    return out;
}

} // namespace msmine

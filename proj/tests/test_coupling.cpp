#include "msmine/coupling.hpp"
#include "msmine/errors.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace msmine;
using namespace msmine::test;

namespace {

const Instant kEnd = parse_instant("2024-11-21T00:00:00Z");
const WindowSpec kWindow{kEnd, 365.0};
const ServiceMap kMap{{{"services/audit", "audit"},
                       {"services/chat", "chat"},
                       {"services/search", "search"}}};

std::string sha_of(int i) {
    std::string s(40, 'a');
    s[38] = static_cast<char>('a' + (i / 16) % 16);
    s[39] = "0123456789abcdef"[i % 16];
    return s;
}

RawCommit commit_to(int i, const std::string& dev, Instant t,
                    std::vector<std::pair<std::string, long>> locs) {
    RawCommit c{sha_of(i), dev, dev, t, {}};
    for (auto& [svc, loc] : locs) {
        c.changes.push_back({"services/" + svc + "/f.ts", FileAction::Modify, loc});
    }
    return c;
}

std::vector<LabeledCommit> labels_to_commits(const std::vector<CommitLabel>& labels) {
    std::vector<LabeledCommit> out;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        LabeledCommit lc;
        lc.sha = sha_of(static_cast<int>(i));
        lc.timestamp = static_cast<Instant>(i);
        lc.label = labels[i];
        lc.contrib_a = labels[i] != CommitLabel::B ? 10 : 0;
        lc.contrib_b = labels[i] != CommitLabel::A ? 10 : 0;
        out.push_back(lc);
    }
    return out;
}

} // namespace

TEST_CASE("label_commits classifies by touched services") {
    auto log = make_activity_log(
        {commit_to(0, "d", kEnd - 300, {{"audit", 10}}),
         commit_to(1, "d", kEnd - 200, {{"audit", 10}, {"chat", 5}}),
         commit_to(2, "d", kEnd - 100, {{"search", 8}})},
        {});
    auto seq = label_commits(log, "d", kMap, "audit", "chat");
    REQUIRE(seq.size() == 2);
    CHECK(seq[0].label == CommitLabel::A);
    CHECK(seq[1].label == CommitLabel::AB);
    CHECK(seq[1].contrib_a == 10);
    CHECK(seq[1].contrib_b == 5);
}

TEST_CASE("label_commits rejects identical services") {
    CHECK_THROWS_AS(label_commits(ActivityLog{}, "d", kMap, "audit", "audit"),
                    ArgumentError);
}

TEST_CASE("switch counting follows the alternation rule") {
    auto count = [](std::vector<CommitLabel> labels) {
        return count_switches(labels_to_commits(labels)).first;
    };
    using enum CommitLabel;
    CHECK(count({A, B, A}) == 2);
    CHECK(count({A, A, A}) == 0);
    CHECK(count({A, AB, B}) == 2);
    CHECK(count({AB}) == 2);
    CHECK(count({AB, AB}) == 4);
    CHECK(count({B, A, AB, A, B}) == 4);
    CHECK(count({}) == 0);
}

TEST_CASE("switch counting matches the naive scanner on random sequences") {
    std::mt19937_64 rng(31);
    for (int round = 0; round < 250; ++round) {
        const std::size_t len = rng() % 21;
        std::vector<CommitLabel> labels;
        for (std::size_t i = 0; i < len; ++i) {
            labels.push_back(static_cast<CommitLabel>(rng() % 3));
        }
        auto [k, n] = count_switches(labels_to_commits(labels));
        CHECK(k == naive_switch_count(labels));
        CHECK(n == static_cast<long>(len));
        if (n >= 2) {
            const double s = switch_ratio(k, n);
            CHECK(s <= static_cast<double>(n) / static_cast<double>(n - 1) + 1e-12);
            const bool has_ab =
                std::any_of(labels.begin(), labels.end(),
                            [](CommitLabel l) { return l == CommitLabel::AB; });
            if (!has_ab) CHECK(s <= 0.5 + 1e-12);
        }
    }
}

TEST_CASE("switch ratio follows the formula with the n<=1 guard") {
    CHECK(switch_ratio(2, 3) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(switch_ratio(0, 7) == 0.0);
    CHECK(switch_ratio(4, 2) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(switch_ratio(2, 1) == 0.0);
    CHECK_THROWS_AS(switch_ratio(1, 0), ArgumentError);
}

TEST_CASE("pair coupling is the weighted harmonic mean") {
    CHECK(pair_coupling(100, 100, 0.5) == doctest::Approx(50.0).epsilon(1e-12));
    CHECK(pair_coupling(0, 500, 0.9) == 0.0);
    CHECK(pair_coupling(100, 300, 1.0) == doctest::Approx(150.0).epsilon(1e-12));
    CHECK(pair_coupling(0, 0, 1.0) == 0.0);
}

TEST_CASE("harmonic mean bound holds") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 200; ++i) {
        const long a = 1 + static_cast<long>(rng() % 1000);
        const long b = 1 + static_cast<long>(rng() % 1000);
        const double hm = pair_coupling(a, b, 1.0);
        CHECK(hm >= static_cast<double>(std::min(a, b)) - 1e-9);
        CHECK(hm <= 2.0 * static_cast<double>(std::min(a, b)) + 1e-9);
    }
}

TEST_CASE("single-service developers produce a zero matrix") {
    auto log = make_activity_log({commit_to(0, "d", kEnd - 100, {{"audit", 50}}),
                                  commit_to(1, "d", kEnd - 50, {{"audit", 30}})},
                                 {});
    auto m = coupling_matrix(log, kMap, kWindow);
    for (const auto& [cell, oc] : m.cells) CHECK(oc == 0.0);
    CHECK(m.per_developer.at("d") == 0.0);
}

TEST_CASE("an A then B pair couples at half the harmonic mean") {
    auto log = make_activity_log({commit_to(0, "d", kEnd - 100, {{"audit", 100}}),
                                  commit_to(1, "d", kEnd - 50, {{"chat", 100}})},
                                 {});
    auto m = coupling_matrix(log, kMap, kWindow);
    CHECK(m.cells.at({"audit", "chat"}) == doctest::Approx(50.0).epsilon(1e-12));
    CHECK(m.per_developer.at("d") == doctest::Approx(50.0).epsilon(1e-12));
}

TEST_CASE("matrix conservation: cells equal per-developer totals") {
    std::mt19937_64 rng(55);
    std::vector<RawCommit> commits;
    const std::vector<std::string> svcs = {"audit", "chat", "search"};
    for (int i = 0; i < 60; ++i) {
        const std::string dev = "d" + std::to_string(rng() % 4) + "@x";
        std::vector<std::pair<std::string, long>> locs;
        const int touches = 1 + static_cast<int>(rng() % 2);
        for (int t = 0; t < touches; ++t) {
            locs.emplace_back(svcs[rng() % 3], 1 + static_cast<long>(rng() % 100));
        }
        commits.push_back(commit_to(i, dev, kEnd - 1000 - 100 * i, locs));
    }
    auto m = coupling_matrix(make_activity_log(commits, {}), kMap, kWindow);
    double cell_sum = 0.0, dev_sum = 0.0;
    for (const auto& [cell, oc] : m.cells) cell_sum += oc;
    for (const auto& [dev, oc] : m.per_developer) dev_sum += oc;
    CHECK(cell_sum == doctest::Approx(dev_sum).epsilon(1e-9));
    CHECK(cell_sum > 0.0);
}

TEST_CASE("coupling is symmetric in the service pair") {
    auto log = make_activity_log({commit_to(0, "d", kEnd - 300, {{"audit", 70}}),
                                  commit_to(1, "d", kEnd - 200, {{"chat", 20}}),
                                  commit_to(2, "d", kEnd - 100, {{"audit", 10}})},
                                 {});
    auto ab = label_commits(log, "d", kMap, "audit", "chat");
    auto ba = label_commits(log, "d", kMap, "chat", "audit");
    auto [k1, n1] = count_switches(ab);
    auto [k2, n2] = count_switches(ba);
    CHECK(k1 == k2);
    CHECK(n1 == n2);
    long sa1 = 0, sb1 = 0, sa2 = 0, sb2 = 0;
    for (const auto& c : ab) { sa1 += c.contrib_a; sb1 += c.contrib_b; }
    for (const auto& c : ba) { sa2 += c.contrib_a; sb2 += c.contrib_b; }
    CHECK(pair_coupling(sa1, sb1, switch_ratio(k1, n1)) ==
          doctest::Approx(pair_coupling(sa2, sb2, switch_ratio(k2, n2))).epsilon(1e-12));
}

TEST_CASE("scaling every loc scales every coupling value linearly") {
    std::mt19937_64 rng(77);
    std::vector<RawCommit> commits;
    const std::vector<std::string> svcs = {"audit", "chat", "search"};
    for (int i = 0; i < 30; ++i) {
        commits.push_back(commit_to(
            i, "d" + std::to_string(rng() % 3) + "@x", kEnd - 50 - 100 * i,
            {{svcs[rng() % 3], 1 + static_cast<long>(rng() % 50)}}));
    }
    auto log = make_activity_log(commits, {});
    auto base = coupling_matrix(log, kMap, kWindow);
    for (auto& c : commits) {
        for (auto& fc : c.changes) fc.loc *= 7;
    }
    auto scaled = coupling_matrix(make_activity_log(commits, {}), kMap, kWindow);
    for (const auto& [cell, oc] : base.cells) {
        CHECK(scaled.cells.at(cell) == doctest::Approx(7.0 * oc).epsilon(1e-12));
    }
}

TEST_CASE("timestamp ties are broken by sha before counting") {
    std::vector<RawCommit> commits = {commit_to(0, "d", kEnd - 100, {{"audit", 10}}),
                                      commit_to(1, "d", kEnd - 100, {{"chat", 10}}),
                                      commit_to(2, "d", kEnd - 100, {{"audit", 10}})};
    auto reference = coupling_matrix(make_activity_log(commits, {}), kMap, kWindow);
    std::reverse(commits.begin(), commits.end());
    auto permuted = coupling_matrix(make_activity_log(commits, {}), kMap, kWindow);
    CHECK(reference.cells.at({"audit", "chat"}) ==
          permuted.cells.at({"audit", "chat"}));
}

TEST_CASE("coupling requires at least two services") {
    ServiceMap single{{{"services/audit", "audit"}}};
    CHECK_THROWS_AS(coupling_matrix(ActivityLog{}, single, kWindow), ArgumentError);
}

TEST_CASE("later windows with no activity are all zero") {
    auto log = make_activity_log({commit_to(0, "d", 1000, {{"audit", 100}}),
                                  commit_to(1, "d", 2000, {{"chat", 100}})},
                                 {});
    auto windows = windowed_coupling(log, kMap, 500, 1.0, 3);
    REQUIRE(windows.size() == 3);
    CHECK(windows[0].per_developer.at("d") > 0.0);
    for (int w : {1, 2}) {
        for (const auto& [cell, oc] : windows[static_cast<std::size_t>(w)].cells) {
            CHECK(oc == 0.0);
        }
    }
}

TEST_CASE("alternation across window boundaries does not couple") {
    // A in window 1, B in window 2: no within-window switch anywhere.
    auto log = make_activity_log(
        {commit_to(0, "d", 1000, {{"audit", 100}}),
         commit_to(1, "d", 1000 + static_cast<Instant>(kSecondsPerDay) + 100,
                   {{"chat", 100}})},
        {});
    auto windows = windowed_coupling(log, kMap, 1000, 1.0, 2);
    for (const auto& w : windows) {
        for (const auto& [cell, oc] : w.cells) CHECK(oc == 0.0);
    }
}

TEST_CASE("a constant label sequence never switches") {
    std::mt19937_64 rng(13);
    for (int len = 1; len < 15; ++len) {
        std::vector<CommitLabel> labels(static_cast<std::size_t>(len),
                                        rng() % 2 ? CommitLabel::A : CommitLabel::B);
        auto [k, n] = count_switches(labels_to_commits(labels));
        CHECK(k == 0);
        CHECK(switch_ratio(k, n) == 0.0);
    }
}

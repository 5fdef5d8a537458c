#include "msmine/fetch.hpp"

#include "msmine/errors.hpp"
#include "msmine/ingest.hpp"

#ifdef MSMINE_HAVE_OPENSSL
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <functional>
#include <memory>
#include <thread>

using nlohmann::json;
namespace fs = std::filesystem;

namespace msmine {

namespace {

struct Client {
    std::unique_ptr<httplib::Client> http;
    httplib::Headers headers;
    const FetchOptions* opts = nullptr;

    explicit Client(const FetchOptions& options) : opts(&options) {
        http = std::make_unique<httplib::Client>(options.base_url);
        http->set_connection_timeout(30);
        http->set_read_timeout(60);
        headers = {{"Accept", "application/vnd.github+json"},
                   {"User-Agent", "msmine"}};
        if (!options.token.empty()) {
            headers.emplace("Authorization", "Bearer " + options.token);
        }
    }

    json get(const std::string& path) {
        int rate_waits = 0;
        for (int attempt = 0;; ++attempt) {
            auto res = http->Get(path, headers);
            if (res) {
                if (res->status == 200) {
                    try {
                        return json::parse(res->body);
                    } catch (const json::exception& e) {
                        throw TransientError("bad JSON from " + path + ": " + e.what());
                    }
                }
                if (res->status == 401) {
                    throw CredentialError("authentication failed for " + path);
                }
                if ((res->status == 403 || res->status == 429)) {
                    const std::string retry_after = res->get_header_value("Retry-After");
                    const std::string remaining =
                        res->get_header_value("X-RateLimit-Remaining");
                    if (!retry_after.empty() || remaining == "0") {
                        if (++rate_waits > 10) {
                            throw TransientError(
                                "rate limit exhausted after retries (retry-after: " +
                                (retry_after.empty() ? "unknown" : retry_after) + ")");
                        }
                        long wait_s = retry_after.empty() ? 5 : std::stol(retry_after);
                        std::this_thread::sleep_for(std::chrono::seconds(wait_s));
                        continue;
                    }
                    throw CredentialError("access forbidden for " + path);
                }
                if (res->status < 500) {
                    throw TransientError("unexpected status " +
                                         std::to_string(res->status) + " for " + path);
                }
            }
            if (attempt >= opts->max_retries) {
                throw TransientError("request failed after " +
                                     std::to_string(opts->max_retries) +
                                     " retries: " + path);
            }
            std::this_thread::sleep_for(
                std::chrono::milliseconds(opts->retry_base_ms << attempt));
        }
    }
};

std::optional<Instant> parse_optional_instant(const json& j, const char* key) {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    return parse_instant(j[key].get<std::string>());
}

FileAction action_from_status(const std::string& status) {
    if (status == "added") return FileAction::Add;
    if (status == "removed") return FileAction::Remove;
    if (status == "renamed") return FileAction::Rename;
    return FileAction::Modify;  // modified, changed, copied
}

std::vector<RawCommit> fetch_commits(Client& client, const FetchOptions& opts) {
    std::vector<RawCommit> commits;
    const std::string base = "/repos/" + opts.repo + "/commits";
    for (int page = 1;; ++page) {
        const std::string path = base + "?per_page=100&page=" + std::to_string(page) +
                                 "&since=" + format_instant(opts.since) +
                                 "&until=" + format_instant(opts.until);
        json list = client.get(path);
        if (!list.is_array() || list.empty()) break;
        for (const auto& item : list) {
            RawCommit c;
            c.sha = to_lower(item.at("sha").get<std::string>());
            const auto& meta = item.at("commit");
            const auto& author = meta.at("author");
            c.author_email = author.value("email", std::string());
            c.author_name = author.value("name", std::string());
            c.timestamp = parse_instant(author.at("date").get<std::string>());

            json detail = client.get(base + "/" + c.sha);
            if (detail.contains("files")) {
                for (const auto& f : detail["files"]) {
                    FileChange fc;
                    fc.path = f.at("filename").get<std::string>();
                    fc.action = action_from_status(f.value("status", "modified"));
                    fc.loc = f.value("changes", 0L);
                    c.changes.push_back(std::move(fc));
                }
            }
            if (c.changes.empty()) continue;  // empty commits carry no signal
            commits.push_back(std::move(c));
        }
        if (list.size() < 100) break;
    }
    return commits;
}

std::vector<IssueEvent> fetch_issues(Client& client, const FetchOptions& opts) {
    std::vector<IssueEvent> events;
    const std::string base = "/repos/" + opts.repo + "/issues";
    for (int page = 1;; ++page) {
        const std::string path = base + "?state=all&per_page=100&page=" +
                                 std::to_string(page) +
                                 "&since=" + format_instant(opts.since);
        json list = client.get(path);
        if (!list.is_array() || list.empty()) break;
        for (const auto& item : list) {
            if (item.contains("pull_request")) continue;
            const long number = item.at("number").get<long>();
            const auto created = parse_optional_instant(item, "created_at");
            if (!created || *created > opts.until || *created < opts.since) continue;
            const std::string opener =
                item.contains("user") && !item["user"].is_null()
                    ? item["user"].value("login", std::string())
                    : std::string();
            events.push_back({number, opener, *created, IssueEventKind::Opened,
                              std::nullopt});

            for (int tpage = 1;; ++tpage) {
                json timeline = client.get(base + "/" + std::to_string(number) +
                                           "/timeline?per_page=100&page=" +
                                           std::to_string(tpage));
                if (!timeline.is_array() || timeline.empty()) break;
                for (const auto& ev : timeline) {
                    const auto t = parse_optional_instant(ev, "created_at");
                    if (!t || *t < opts.since || *t > opts.until) continue;
                    std::string actor;
                    if (ev.contains("actor") && !ev["actor"].is_null()) {
                        actor = ev["actor"].value("login", std::string());
                    } else if (ev.contains("user") && !ev["user"].is_null()) {
                        actor = ev["user"].value("login", std::string());
                    }
                    if (actor.empty()) continue;
                    const std::string kind = ev.value("event", std::string("commented"));
                    IssueEvent out{number, actor, *t, IssueEventKind::Other, std::nullopt};
                    if (kind == "commented") {
                        out.kind = IssueEventKind::Commented;
                    } else if (kind == "closed") {
                        out.kind = IssueEventKind::Closed;
                    } else if ((kind == "referenced" || kind == "committed") &&
                               ev.contains("commit_id") && !ev["commit_id"].is_null()) {
                        out.kind = IssueEventKind::CommitLinked;
                        out.linked_sha = to_lower(ev["commit_id"].get<std::string>());
                    }
                    events.push_back(std::move(out));
                }
                if (timeline.size() < 100) break;
            }
        }
        if (list.size() < 100) break;
    }
    return events;
}

void atomic_write(const fs::path& target,
                  const std::function<void(const std::string&)>& writer) {
    const fs::path tmp = target.string() + ".tmp";
    writer(tmp.string());
    fs::rename(tmp, target);
}

} // namespace

FetchResult fetch_remote(const FetchOptions& options) {
    if (options.until < options.since) {
        throw ArgumentError("until precedes since");
    }
    if (options.repo.find('/') == std::string::npos) {
        throw ArgumentError("repo must be 'owner/name'");
    }
    fs::create_directories(options.out_dir);

    Client client(options);
    auto commits = fetch_commits(client, options);
    auto issues = fetch_issues(client, options);

    // Canonical order keeps reruns byte-identical regardless of API paging.
    std::sort(commits.begin(), commits.end(), [](const auto& a, const auto& b) {
        return std::tie(a.timestamp, a.sha) < std::tie(b.timestamp, b.sha);
    });
    std::sort(issues.begin(), issues.end(), [](const IssueEvent& a, const IssueEvent& b) {
        const std::string empty;
        const std::string& sa = a.linked_sha ? *a.linked_sha : empty;
        const std::string& sb = b.linked_sha ? *b.linked_sha : empty;
        return std::tie(a.timestamp, a.issue_id, a.kind, a.actor_email, sa) <
               std::tie(b.timestamp, b.issue_id, b.kind, b.actor_email, sb);
    });

    FetchResult result;
    result.commits_path = (fs::path(options.out_dir) / "commits.jsonl").string();
    result.issues_path = (fs::path(options.out_dir) / "issues.jsonl").string();
    atomic_write(result.commits_path,
                 [&](const std::string& p) { write_commits(p, commits); });
    atomic_write(result.issues_path,
                 [&](const std::string& p) { write_issues(p, issues); });
    return result;
}

} // namespace msmine

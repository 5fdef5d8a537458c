#include "msmine/ingest.hpp"

#include "msmine/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <fnmatch.h>
#include <fstream>
#include <sstream>
#include <unordered_set>

using nlohmann::json;

namespace msmine {

std::string to_lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

FileAction parse_action(const std::string& s) {
    if (s == "add") return FileAction::Add;
    if (s == "modify") return FileAction::Modify;
    if (s == "rename") return FileAction::Rename;
    if (s == "remove") return FileAction::Remove;
    throw ParseError("unknown file action '" + s + "'");
}

std::string action_name(FileAction a) {
    switch (a) {
        case FileAction::Add: return "add";
        case FileAction::Modify: return "modify";
        case FileAction::Rename: return "rename";
        case FileAction::Remove: return "remove";
    }
    return "modify";
}

IssueEventKind parse_issue_kind(const std::string& s) {
    if (s == "opened") return IssueEventKind::Opened;
    if (s == "commented") return IssueEventKind::Commented;
    if (s == "closed") return IssueEventKind::Closed;
    if (s == "commit_linked") return IssueEventKind::CommitLinked;
    if (s == "other") return IssueEventKind::Other;
    throw ParseError("unknown issue event kind '" + s + "'");
}

std::string issue_kind_name(IssueEventKind k) {
    switch (k) {
        case IssueEventKind::Opened: return "opened";
        case IssueEventKind::Commented: return "commented";
        case IssueEventKind::Closed: return "closed";
        case IssueEventKind::CommitLinked: return "commit_linked";
        case IssueEventKind::Other: return "other";
    }
    return "other";
}

namespace {

bool is_sha(const std::string& s) {
    if (s.size() != 40) return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
        return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
    });
}

void check_path(const std::string& path, std::size_t line_no) {
    if (path.empty() || path.front() == '/') {
        throw ParseError("record " + std::to_string(line_no) +
                         ": bad file path '" + path + "'");
    }
}

[[noreturn]] void bad_record(std::size_t line_no, const std::string& what) {
    throw ParseError("record " + std::to_string(line_no) + ": " + what);
}

} // namespace

std::vector<RawCommit> load_commits(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open commit export '" + path + "'");
    std::vector<RawCommit> out;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            bad_record(line_no, e.what());
        }
        RawCommit c;
        try {
            c.sha = j.at("sha").get<std::string>();
            c.author_email = j.at("author_email").get<std::string>();
            c.author_name = j.value("author_name", std::string());
            c.timestamp = parse_instant(j.at("timestamp").get<std::string>());
            for (const auto& jc : j.at("changes")) {
                FileChange fc;
                fc.path = jc.at("path").get<std::string>();
                fc.action = parse_action(jc.at("action").get<std::string>());
                fc.loc = jc.at("loc").get<long>();
                if (fc.loc < 0) bad_record(line_no, "negative loc");
                check_path(fc.path, line_no);
                c.changes.push_back(std::move(fc));
            }
        } catch (const json::exception& e) {
            bad_record(line_no, e.what());
        }
        if (!is_sha(c.sha)) bad_record(line_no, "malformed sha '" + c.sha + "'");
        if (c.changes.empty()) bad_record(line_no, "commit with no changes");
        if (!seen.insert(c.sha).second) {
            throw ValidationError("duplicate commit sha '" + c.sha + "' at record " +
                                  std::to_string(line_no));
        }
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<IssueEvent> load_issues(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open issue export '" + path + "'");
    std::vector<IssueEvent> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            bad_record(line_no, e.what());
        }
        IssueEvent ev;
        try {
            ev.issue_id = j.at("issue_id").get<long>();
            ev.actor_email = j.at("actor_email").get<std::string>();
            ev.timestamp = parse_instant(j.at("timestamp").get<std::string>());
            ev.kind = parse_issue_kind(j.at("kind").get<std::string>());
            if (j.contains("linked_sha")) ev.linked_sha = j["linked_sha"].get<std::string>();
        } catch (const json::exception& e) {
            bad_record(line_no, e.what());
        }
        if (ev.issue_id <= 0) bad_record(line_no, "non-positive issue_id");
        if (ev.kind == IssueEventKind::CommitLinked) {
            if (!ev.linked_sha || !is_sha(*ev.linked_sha)) {
                throw ValidationError("record " + std::to_string(line_no) +
                                      ": commit_linked event without a valid sha");
            }
        } else if (ev.linked_sha) {
            bad_record(line_no, "linked_sha on non-commit_linked event");
        }
        out.push_back(std::move(ev));
    }
    return out;
}

namespace {

json commit_to_json(const RawCommit& c) {
    json changes = json::array();
    for (const auto& fc : c.changes) {
        changes.push_back({{"path", fc.path},
                           {"action", action_name(fc.action)},
                           {"loc", fc.loc}});
    }
    return {{"sha", c.sha},
            {"author_email", c.author_email},
            {"author_name", c.author_name},
            {"timestamp", format_instant(c.timestamp)},
            {"changes", changes}};
}

json issue_to_json(const IssueEvent& ev) {
    json j = {{"issue_id", ev.issue_id},
              {"actor_email", ev.actor_email},
              {"timestamp", format_instant(ev.timestamp)},
              {"kind", issue_kind_name(ev.kind)}};
    if (ev.linked_sha) j["linked_sha"] = *ev.linked_sha;
    return j;
}

} // namespace

void write_commits(const std::string& path, const std::vector<RawCommit>& commits) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path + "'");
    for (const auto& c : commits) out << commit_to_json(c).dump() << '\n';
}

void write_issues(const std::string& path, const std::vector<IssueEvent>& issues) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path + "'");
    for (const auto& ev : issues) out << issue_to_json(ev).dump() << '\n';
}

IdentityMap load_identity_map(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open identity map '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(std::string("identity map: ") + e.what());
    }
    IdentityMap map;
    for (auto it = j.begin(); it != j.end(); ++it) {
        map.aliases[it.key()] = it.value().get<std::string>();
    }
    map.validate();
    return map;
}

BotFilter load_bot_filter(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open bot filter '" + path + "'");
    BotFilter f;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back())))
            line.pop_back();
        std::size_t start = 0;
        while (start < line.size() && std::isspace(static_cast<unsigned char>(line[start])))
            ++start;
        line.erase(0, start);
        if (!line.empty()) f.patterns.push_back(line);
    }
    return f;
}

void IdentityMap::validate() const {
    for (const auto& [alias, target] : aliases) {
        const std::string t = to_lower(target);
        auto it = aliases.find(t);
        if (it == aliases.end()) {
            // Key lookup is case-insensitive at application time.
            for (const auto& [k, v] : aliases) {
                if (to_lower(k) == t && to_lower(v) != t) {
                    throw ValidationError("alias chain: '" + alias + "' -> '" +
                                          target + "' -> '" + v + "'");
                }
            }
            continue;
        }
        if (to_lower(it->second) != t) {
            throw ValidationError("alias chain: '" + alias + "' -> '" + target +
                                  "' -> '" + it->second + "'");
        }
    }
}

std::string IdentityMap::canonical(const std::string& email) const {
    const std::string key = to_lower(email);
    auto it = aliases.find(key);
    if (it != aliases.end()) return to_lower(it->second);
    // Map files may carry mixed-case keys; fall back to a linear scan.
    for (const auto& [k, v] : aliases) {
        if (to_lower(k) == key) return to_lower(v);
    }
    return key;
}

bool BotFilter::matches(const std::string& id) const {
    for (const auto& pat : patterns) {
        if (fnmatch(pat.c_str(), id.c_str(), FNM_CASEFOLD) == 0) return true;
    }
    return false;
}

std::pair<std::vector<RawCommit>, std::vector<IssueEvent>>
unify_identities(std::vector<RawCommit> commits, std::vector<IssueEvent> issues,
                 const IdentityMap& map) {
    map.validate();
    for (auto& c : commits) c.author_email = map.canonical(c.author_email);
    for (auto& ev : issues) ev.actor_email = map.canonical(ev.actor_email);
    return {std::move(commits), std::move(issues)};
}

namespace {

std::vector<std::string> local_tokens(const std::string& email) {
    auto at = email.find('@');
    std::string local = to_lower(email.substr(0, at));
    std::vector<std::string> toks;
    std::string cur;
    for (char c : local) {
        if (c == '.' || c == '_' || c == '-' || c == '+') {
            if (!cur.empty()) toks.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) toks.push_back(cur);
    return toks;
}

// Signature -> how it was formed, for the evidence string.
std::vector<std::pair<std::string, std::string>> signatures(const std::string& email) {
    auto toks = local_tokens(email);
    std::vector<std::pair<std::string, std::string>> sigs;
    if (toks.empty()) return sigs;
    if (toks.size() == 1) {
        sigs.emplace_back(toks[0], "local-part");
        return sigs;
    }
    const std::string& first = toks.front();
    const std::string& last = toks.back();
    sigs.emplace_back(first + "." + last, "first+last");
    sigs.emplace_back(first.substr(0, 1) + last, "initial+last");
    sigs.emplace_back(first + last.substr(0, 1), "first+initial");
    std::string initials;
    for (const auto& t : toks) initials += t.substr(0, 1);
    sigs.emplace_back(initials, "initials");
    return sigs;
}

} // namespace

std::vector<AliasSuggestion> suggest_aliases(const std::vector<RawCommit>& commits) {
    std::set<std::string> emails;
    for (const auto& c : commits) emails.insert(to_lower(c.author_email));
    std::vector<std::string> list(emails.begin(), emails.end());

    std::vector<AliasSuggestion> out;
    for (std::size_t i = 0; i < list.size(); ++i) {
        auto sigs_i = signatures(list[i]);
        for (std::size_t j = i + 1; j < list.size(); ++j) {
            auto sigs_j = signatures(list[j]);
            std::string evidence;
            for (const auto& [sa, la] : sigs_i) {
                if (sa.size() < 3) continue;  // one- and two-letter signatures collide too easily
                for (const auto& [sb, lb] : sigs_j) {
                    if (sa == sb) {
                        evidence = (la == lb) ? la + " match" : la + "/" + lb + " match";
                        break;
                    }
                }
                if (!evidence.empty()) break;
            }
            if (!evidence.empty()) out.push_back({list[i], list[j], evidence});
        }
    }
    return out;
}

ActivityLog make_activity_log(std::vector<RawCommit> commits,
                              std::vector<IssueEvent> issues) {
    std::sort(commits.begin(), commits.end(), [](const RawCommit& a, const RawCommit& b) {
        return std::tie(a.timestamp, a.sha) < std::tie(b.timestamp, b.sha);
    });
    std::sort(issues.begin(), issues.end(), [](const IssueEvent& a, const IssueEvent& b) {
        const std::string empty;
        const std::string& sa = a.linked_sha ? *a.linked_sha : empty;
        const std::string& sb = b.linked_sha ? *b.linked_sha : empty;
        return std::tie(a.timestamp, a.issue_id, a.kind, a.actor_email, sa) <
               std::tie(b.timestamp, b.issue_id, b.kind, b.actor_email, sb);
    });
    ActivityLog log;
    for (const auto& c : commits) log.developers.insert(c.author_email);
    for (const auto& ev : issues) log.developers.insert(ev.actor_email);
    log.commits = std::move(commits);
    log.issues = std::move(issues);
    return log;
}

ActivityLog filter_bots(const ActivityLog& log, const BotFilter& filter) {
    if (filter.patterns.empty()) return log;
    std::vector<RawCommit> commits;
    commits.reserve(log.commits.size());
    for (const auto& c : log.commits) {
        if (!filter.matches(c.author_email)) commits.push_back(c);
    }
    std::vector<IssueEvent> issues;
    issues.reserve(log.issues.size());
    for (const auto& ev : log.issues) {
        if (!filter.matches(ev.actor_email)) issues.push_back(ev);
    }
    return make_activity_log(std::move(commits), std::move(issues));
}

} // namespace msmine

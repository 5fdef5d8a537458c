#pragma once

#include "msmine/time.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace msmine {

enum class FileAction { Add, Modify, Rename, Remove };

FileAction parse_action(const std::string& s);
std::string action_name(FileAction a);

struct FileChange {
    std::string path;  // repository-relative, '/' separators, no leading '/'
    FileAction action = FileAction::Modify;
    long loc = 0;  // lines changed, >= 0 (renames may carry 0)

    bool operator==(const FileChange&) const = default;
};

struct RawCommit {
    std::string sha;  // 40 lowercase hex chars
    std::string author_email;
    std::string author_name;
    Instant timestamp = 0;
    std::vector<FileChange> changes;  // non-empty
};

enum class IssueEventKind { Opened, Commented, Closed, CommitLinked, Other };

IssueEventKind parse_issue_kind(const std::string& s);
std::string issue_kind_name(IssueEventKind k);

struct IssueEvent {
    long issue_id = 0;  // positive
    std::string actor_email;
    Instant timestamp = 0;
    IssueEventKind kind = IssueEventKind::Other;
    std::optional<std::string> linked_sha;  // present iff kind == CommitLinked
};

/// Alias email -> canonical developer id. Chain-free and idempotent;
/// canonical ids are lowercased on application.
struct IdentityMap {
    std::map<std::string, std::string> aliases;

    /// Throws ValidationError if any alias chain exists.
    void validate() const;

    /// Canonical id for an email: mapped value if present (case-insensitive
    /// key lookup), otherwise the lowercased email itself.
    std::string canonical(const std::string& email) const;
};

struct BotFilter {
    std::vector<std::string> patterns;  // glob-style, case-insensitive

    bool matches(const std::string& id) const;
};

/// Normalized, identity-unified, time-ordered commit and issue events.
/// Immutable after construction; the single source all analyses read.
struct ActivityLog {
    std::vector<RawCommit> commits;   // sorted by (timestamp, sha)
    std::vector<IssueEvent> issues;   // sorted by (timestamp, issue_id, ...)
    std::set<std::string> developers; // canonical ids
};

std::vector<RawCommit> load_commits(const std::string& path);
std::vector<IssueEvent> load_issues(const std::string& path);

/// Canonical line-delimited JSON serializations (keys sorted); load of a
/// written file round-trips byte-equal.
void write_commits(const std::string& path, const std::vector<RawCommit>& commits);
void write_issues(const std::string& path, const std::vector<IssueEvent>& issues);

IdentityMap load_identity_map(const std::string& path);
BotFilter load_bot_filter(const std::string& path);

/// Replaces every author/actor with its canonical id. Validates the map
/// before rewriting anything.
std::pair<std::vector<RawCommit>, std::vector<IssueEvent>>
unify_identities(std::vector<RawCommit> commits, std::vector<IssueEvent> issues,
                 const IdentityMap& map);

struct AliasSuggestion {
    std::string email_a;
    std::string email_b;
    std::string evidence;
};

/// Candidate alias pairs whose local-parts match under first/last/initials
/// permutations. Advisory only, never auto-applied.
std::vector<AliasSuggestion> suggest_aliases(const std::vector<RawCommit>& commits);

/// Sorts events and collects the developer set.
ActivityLog make_activity_log(std::vector<RawCommit> commits,
                              std::vector<IssueEvent> issues);

/// Removes every event whose actor matches a bot pattern.
ActivityLog filter_bots(const ActivityLog& log, const BotFilter& filter);

std::string to_lower(std::string s);

} // namespace msmine

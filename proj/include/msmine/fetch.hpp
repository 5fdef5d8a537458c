#pragma once

#include "msmine/time.hpp"

#include <string>

namespace msmine {

struct FetchOptions {
    std::string repo;   // "owner/name"
    std::string token;  // may be empty for public data
    Instant since = 0;
    Instant until = 0;
    std::string out_dir;
    std::string base_url = "https://api.github.com";
    int max_retries = 3;
    int retry_base_ms = 500;
};

struct FetchResult {
    std::string commits_path;
    std::string issues_path;
};

/// Downloads commits and issue timelines in the given range and writes
/// the canonical export files. Paginates fully, waits out rate limits,
/// and never leaves a truncated file (temp write + rename). Re-running
/// against unchanged remote state is byte-idempotent.
FetchResult fetch_remote(const FetchOptions& options);

} // namespace msmine

#pragma once

#include <stdexcept>
#include <string>

namespace msmine {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input records (bad JSON, bad field values); message names the record.
struct ParseError : Error {
    using Error::Error;
};

// Structurally well-formed input violating an invariant (duplicate SHA, alias chain).
struct ValidationError : Error {
    using Error::Error;
};

// Caller misuse: bad argument combination, unknown developer/service.
struct ArgumentError : Error {
    using Error::Error;
};

// Computation undefined on the given domain (no File nodes, graph too small).
struct EmptyDomainError : Error {
    using Error::Error;
};

// Remote fetch: bad or missing credentials.
struct CredentialError : Error {
    using Error::Error;
};

// Remote fetch: transient failure after retries; rerunning is the recovery path.
struct TransientError : Error {
    using Error::Error;
};

} // namespace msmine

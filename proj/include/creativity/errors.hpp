#pragma once

#include <stdexcept>
#include <string>

namespace creativity {

// Base for everything this library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed object state: bad probability vectors, inconsistent table sizes,
// overlapping token namespaces, and similar construction-time problems.
struct ValidationError : Error {
    using Error::Error;
};

// Two operands whose sizes must agree do not.
struct DimensionError : Error {
    using Error::Error;
};

// An argument is outside the mathematical domain of the operation.
struct DomainError : Error {
    using Error::Error;
};

// An enumeration would exceed the configured cap.
struct CapacityError : Error {
    using Error::Error;
};

// A key (creator id, prompt id, context) has no entry.
struct LookupError : Error {
    using Error::Error;
};

// Requested target cannot be met for any sample size.
struct InfeasibleError : Error {
    using Error::Error;
};

// Declared per-sequence score ceiling is contradicted by the data.
struct BoundViolationError : Error {
    using Error::Error;
};

// Declared population weight floor is contradicted by the data.
struct WeightViolationError : Error {
    using Error::Error;
};

// Child scorer process broke the wire contract.  Carries the offending
// payload (raw line or a short description) for diagnosis.
struct ProtocolError : Error {
    explicit ProtocolError(const std::string& what, std::string payload_text = {})
        : Error(what), payload(std::move(payload_text)) {}
    std::string payload;
};

}  // namespace creativity

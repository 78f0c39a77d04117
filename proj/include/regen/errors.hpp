#pragma once

#include <stdexcept>
#include <string>

namespace regen {

/// Enumeration or chain construction would exceed the configured size cap.
class limit_error : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Structured input violates a documented precondition (non-stochastic row,
/// inconsistent levels, malformed table, ...).
class validation_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An identity the library guarantees unconditionally failed to hold.
/// Seeing this means a construction bug, not bad input.
class invariant_violation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// The requested Monte Carlo route is not defined for the given measure.
class unsupported_spec_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The deletion kernel is not determined by the structure at this argument
/// (the conditioning event has probability zero).
class ambiguity_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

} // namespace regen

#pragma once

#include <stdexcept>
#include <string>

namespace detsynth {

// Input or model ill-formed (bad file, unknown id, broken ERM, ...).
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

// A configured cap was exceeded; results would be incomplete. Never a silent
// truncation: callers either raise this or return a complete answer.
class resource_error : public std::runtime_error {
public:
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

// Internal invariant broke. Indicates a bug, not bad input.
class invariant_error : public std::logic_error {
public:
    explicit invariant_error(const std::string& what) : std::logic_error(what) {}
};

} // namespace detsynth

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rstre {

// Invalid arguments / preconditions. CLI maps this to exit code 2.
struct invalid_parameter : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A configured size cap was exceeded (oracle n>256, enumeration too large, ...).
// CLI maps this to exit code 3.
struct size_cap_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A sampler ran out of its step budget. Carries diagnostics: how far it got.
struct budget_exceeded : std::runtime_error {
    std::uint64_t steps_taken = 0;
    std::uint64_t vertices_attached = 0;
    budget_exceeded(const std::string& msg, std::uint64_t steps, std::uint64_t attached)
        : std::runtime_error(msg), steps_taken(steps), vertices_attached(attached) {}
};

// Extended-range arithmetic left its exponent budget.
struct numeric_range_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Something that the algorithm guarantees internally did not hold.
struct internal_invariant_violation : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace rstre

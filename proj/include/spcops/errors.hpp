#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spcops {

// Bad vertex id, empty vertex set, malformed flag value.
struct argument_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Input violates an operation's structural precondition (not SP, not
// 2-connected, disconnected, wrong phase).
struct precondition_error : std::logic_error {
    using std::logic_error::logic_error;
};

// Invalid game configuration, e.g. fewer cops than exits.
struct config_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Illegal cop or robber move for the current state.
struct move_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// An internal invariant failed. Always a bug, never a user error.
struct invariant_violation : std::logic_error {
    using std::logic_error::logic_error;
};

struct capacity_error : std::runtime_error {
    capacity_error(std::size_t states, std::size_t budget)
        : std::runtime_error("state space has " + std::to_string(states) +
                             " states, budget is " + std::to_string(budget)),
          state_count(states), state_budget(budget) {}

    std::size_t state_count;
    std::size_t state_budget;
};

} // namespace spcops

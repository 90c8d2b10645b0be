#pragma once
/** @file errors.hpp
 *  Error taxonomy shared by all modules.
 */

#include <stdexcept>
#include <string>

namespace aps {

/// Malformed or out-of-domain input (bad word, bad digits, empty needle, ...).
struct input_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Construction of a degenerate system (image of b contains no a, or no b at all).
struct degenerate_error : input_error {
    using input_error::input_error;
};

/// A materialization would exceed the configured length budget.
struct budget_error : std::runtime_error {
    long long projected;
    explicit budget_error(const std::string& what, long long projected_length)
        : std::runtime_error(what), projected(projected_length) {}
};

/// An operation was called outside its applicable classification branch.
struct precondition_error : std::logic_error {
    using std::logic_error::logic_error;
};

/// A scan finished without finding the requested object at the allowed depth.
struct depth_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace aps

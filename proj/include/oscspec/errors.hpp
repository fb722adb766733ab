#pragma once

#include <stdexcept>
#include <string>

namespace oscspec {

// Malformed or out-of-range input (bad files, invalid parameters).
struct input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A numerical procedure failed to reach its tolerance.
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace oscspec

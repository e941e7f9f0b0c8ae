#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace utimage {

struct SyntaxError : std::runtime_error {
    std::size_t position;  // byte offset into the input text
    SyntaxError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"),
          position(pos) {}
};

struct NotMultilinear : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SizeMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MissingAssignment : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Inconsistent reduction system; indicates an internal bug, never user error.
struct SolveFailure : std::logic_error {
    using std::logic_error::logic_error;
};

struct TargetOutsideImage : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegreeCapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnsupportedSize : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace utimage

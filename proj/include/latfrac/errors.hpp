#pragma once

#include <stdexcept>
#include <string>

namespace latfrac {

// Parameter outside its documented domain (p <= 0, alpha out of range, ...).
struct invalid_parameter : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// det(A) = 0 where an exact inverse is required.
struct singular_matrix : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Requested precision or size not reachable within the iteration cap.
struct budget_exceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Atom construction impossible on the given cube.
struct cannot_construct : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input file; message names the offending field.
struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace latfrac

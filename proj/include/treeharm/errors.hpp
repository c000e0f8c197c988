#pragma once

#include <stdexcept>
#include <string>

namespace treeharm {

/// A value failed a structural check: bad parameter, malformed object,
/// or an index outside the supported range.
struct validation_error : std::runtime_error {
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

/// An operation was called outside its admissible inputs.
struct precondition_error : std::invalid_argument {
    explicit precondition_error(const std::string& what) : std::invalid_argument(what) {}
};

} // namespace treeharm

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace evplace {

/// Malformed input file: bad column, bad value, duplicate id. The message
/// names every offending row and field.
struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad or missing key in a parameter file.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An operation that requires at least one site / residential point got none.
struct EmptyInstanceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Instance exceeds the guard rails of an enumeration-based routine.
struct TooLargeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Numerical breakdown inside the LP machinery; carries diagnostics.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A residential point has no candidate site within driving range, so no
/// feasible assignment can exist. Lists every such point.
struct UnreachableDemandError : std::runtime_error {
    std::vector<std::string> rp_ids;
    explicit UnreachableDemandError(std::vector<std::string> ids);
};

}  // namespace evplace

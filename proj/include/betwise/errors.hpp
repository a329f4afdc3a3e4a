#pragma once

#include <stdexcept>
#include <string>

namespace betwise {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid configuration: bad parameters, malformed JSON, unresolvable names.
struct ConfigError : Error {
    using Error::Error;
};

/// Density requested for a family without one (discrete support).
struct UnsupportedDensityError : Error {
    using Error::Error;
};

/// Bet-weighted estimate requested with zero total stake.
struct UndefinedEstimateError : Error {
    using Error::Error;
};

}  // namespace betwise

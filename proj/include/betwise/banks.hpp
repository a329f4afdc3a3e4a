#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "betwise/distributions.hpp"

namespace betwise {

/// Builds a bank of specs from a JSON document. Supported keys:
///   "explicit":   list of spec objects ({"family": ..., parameters, "label"?})
///   "generators": list of parameter grids, e.g.
///                 {"family":"beta","a":AXIS,"b":AXIS}
///                 {"family":"beta_mean","mean":AXIS,"concentration":AXIS}
///                 {"family":"truncated_normal","loc":AXIS,"scale":AXIS}
///                 {"family":"bernoulli","p":AXIS}
///                 {"family":"uniform_spike","center":AXIS,"halfwidth":AXIS,"mass":AXIS}
///   "mean_range": [lo, hi] keeps only specs whose analytic mean falls inside
/// An AXIS is {"values":[...]} or {"linspace"/"geomspace":{"start","stop","count"}}.
/// Deterministic order; duplicate or missing labels are configuration errors.
std::vector<DistributionSpec> make_bank(const nlohmann::json& config);

DistributionSpec spec_from_json(const nlohmann::json& entry);

}  // namespace betwise

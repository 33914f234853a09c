#pragma once

#include <iosfwd>

#include "jamsim/scenario.hpp"

namespace jamsim {

/// Runs every (sweep value x pilot length x method) combination and streams
/// CSV rows. Deterministic given the scenario seed; the only run-dependent
/// output is a timestamp comment, suppressed by `reproducible`.
void run_scenario(const Scenario& scenario, std::ostream& out);

/// Same, writing to scenario.out_path. Throws Error when the path is not
/// writable.
void run_scenario(const Scenario& scenario);

}  // namespace jamsim

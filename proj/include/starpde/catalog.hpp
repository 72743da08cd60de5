#pragma once

#include "starpde/generate.hpp"
#include "starpde/system.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace starpde {

/// A named system with its known solutions and machine-checkable identities.
/// Loading verifies every invariant; numeric-only fixtures carry point
/// callbacks instead of a symbolic system.
struct Fixture {
    std::string name;
    std::optional<SystemSpec> sys;
    std::optional<NumericSystem> numeric;
    std::vector<std::pair<std::string, SolutionVec>> known_solutions;
    std::vector<std::pair<std::string, std::function<bool()>>> identities;

    bool numeric_only() const { return !sys.has_value(); }
};

std::vector<std::string> catalog_names();

/// Loads and verifies a fixture; unknown names raise an error that lists the
/// available fixtures.
Fixture load_fixture(const std::string& name);

/// One perturbed entry per fixture; the result fails admits_multiplication
/// (numeric fixtures fail the grid check instead).
Fixture load_broken_fixture(const std::string& name);

/// Points with y^2 > 4x for the radical (3,2,1) branch.
std::vector<std::vector<double>> default_321_grid();

} // namespace starpde

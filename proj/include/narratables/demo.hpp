#pragma once

// Built-in four-particle scenario: two particles at rest, two more hitting
// them at the same rest-frame time, spins prepared as a product of singlets.
// The numbers (positions, speed 1/2, boosts 3/5 and 1/2) are implementation
// choices made so every gamma and tau involved is rational.

#include "narratables/io/scenario_file.hpp"

namespace narratables::demo {

inline io::ScenarioFile four_particle_scenario_file() {
    using geometry::RationalVec3;
    const Rational half(1, 2);
    io::ScenarioFile f;
    f.name = "four-particle-swap";
    // slots 0..3 are particles 1..4
    f.particles = {
        {0, "A", {0, -1, 0, 0}, RationalVec3{0, 0, 0}},
        {1, "B", {0, 1, 0, 0}, RationalVec3{0, 0, 0}},
        {2, "C", {0, -1, 2, 0}, RationalVec3{0, -half, 0}},
        {3, "D", {0, 1, 2, 0}, RationalVec3{0, -half, 0}},
    };
    f.initial_state = quantum::PairingSpec{{{0, 1}, {2, 3}}, {}};
    f.rules = {
        {"flip", {{"*", "*", {io::UnitarySpec::Kind::Swap, Eigen::Matrix4cd::Identity()}}}},
        {"free", {}},
    };
    f.foliations = {RationalVec3{0, 0, 0}, RationalVec3{Rational(3, 5), 0, 0}, RationalVec3{0, half, 0}};
    return f;
}

inline io::LoadedScenario four_particle_scenario() { return io::build(four_particle_scenario_file()); }

} // namespace narratables::demo

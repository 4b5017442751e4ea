/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cstdint>

#include "mgrisk/hazard.hpp"
#include "mgrisk/network.hpp"

namespace mgrisk {

struct RandomInstanceOptions {
    std::uint64_t seed = 1;
    int min_blocks = 2;
    int max_blocks = 5;
    int max_switches = 4;
    int max_buses_per_block = 3;
    /// Every forming-capable source gets effectively unlimited capacity.
    bool unbounded_generation = false;
};

/// A random feeder with its hazard tables. Line and bus risk are drawn from
/// [0, 150], switch risk from [0, 100] and per-load SVI from [0, 10].
struct RandomInstance {
    NetworkData network;
    RiskTable risk;
    SviTable svi;
};

RandomInstance random_instance(const RandomInstanceOptions& opt);

/// Random radial island of `buses` three-phase buses fed by one substation
/// source, with no switches. Used for power-flow property checks.
NetworkData random_radial_island(std::uint64_t seed, int buses);

}  // namespace mgrisk

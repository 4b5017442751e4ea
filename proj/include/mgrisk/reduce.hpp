/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <map>
#include <string>
#include <vector>

#include "mgrisk/network.hpp"

namespace mgrisk {

struct ReductionResult {
    NetworkModel network;
    /// Removed bus/line/switch/transformer id -> primary-side bus it collapsed onto.
    std::map<std::string, std::string> absorbed_into_bus;
    /// Removed load id -> aggregate load id that now carries its demand and SVI.
    std::map<std::string, std::string> load_aggregate;
    /// Distribution transformers that could not be removed, with the reason.
    std::vector<std::string> retained;
};

/// Collapses the secondary circuit behind every distribution transformer onto
/// its primary-side bus. Loads and solar are summed per phase into one
/// aggregate each; storage and generators move unaggregated.
ReductionResult reduce_feeder(const NetworkModel& net);

}  // namespace mgrisk

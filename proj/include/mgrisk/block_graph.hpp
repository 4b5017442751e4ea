/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mgrisk/network.hpp"

namespace mgrisk {

struct LoadBlock {
    int id = 0;  // 1-based; block 1 holds the substation
    std::vector<std::string> bus_ids;  // sorted
    std::vector<std::size_t> buses;    // bus indices, ascending
    double total_pd = 0.0;             // kW over all phases
    double total_svi = 0.0;
    double risk = 0.0;
    bool contains_substation = false;
    std::vector<std::string> forming_capable_sources;
    std::vector<std::size_t> forming_sources;  // source indices, file order
};

struct BlockEdge {
    std::string switch_id;
    std::size_t sw = 0;  // switch index in the network
    std::size_t a = 0;   // block index (0-based)
    std::size_t b = 0;
    double risk = 0.0;
};

/// Quotient of the feeder by its switch-free components. Edge i is switch i.
class BlockGraph {
 public:
    std::vector<LoadBlock> blocks;
    std::vector<BlockEdge> edges;

    std::size_t size() const { return blocks.size(); }
    std::size_t block_of_bus(std::size_t bus) const { return bus_block_[bus]; }
    /// Block holding source `src`.
    std::size_t block_of_source(std::size_t src) const { return source_block_[src]; }
    std::size_t substation_block() const { return 0; }
    std::size_t source_count() const { return source_block_.size(); }
    bool is_forming_capable(std::size_t src) const { return forming_capable_[src] != 0; }
    const std::string& source_id(std::size_t src) const { return source_ids_[src]; }
    std::optional<std::size_t> substation_source() const { return substation_source_; }

    double total_risk(bool include_switches) const;
    double total_pd() const;
    double total_svi() const;

    /// Replaces block risk, block vulnerability and switch risk.
    void apply_hazard(const std::vector<double>& block_risk, const std::vector<double>& block_svi,
                      const std::vector<double>& switch_risk);

 private:
    friend BlockGraph identify_blocks(const NetworkModel& net);
    std::vector<std::size_t> bus_block_;
    std::vector<std::size_t> source_block_;
    std::vector<char> forming_capable_;
    std::vector<std::string> source_ids_;
    std::optional<std::size_t> substation_source_;
};

/// Components under all-switches-open. Risk comes from switch fields only
/// (blocks start at 0) until hazard data is applied; SVI from load fields.
/// A switch with both ends in one block becomes a self-loop; closing it is a cycle.
BlockGraph identify_blocks(const NetworkModel& net);

struct Island {
    std::vector<std::size_t> blocks;    // block indices, ascending
    std::vector<std::size_t> switches;  // closed switch indices, ascending
    std::optional<std::size_t> forming_source;

    bool energized() const { return forming_source.has_value(); }
};

enum class TopologyStatus { ok, multiple_forming, cycle };

struct IslandSet {
    std::vector<Island> islands;  // ordered by smallest block index
    TopologyStatus status = TopologyStatus::ok;
    std::string reason;

    bool feasible() const { return status == TopologyStatus::ok; }
};

/// `closed[i]` is the state of switch i; `forming[s]` marks source s as grid-forming.
IslandSet islands_for(const BlockGraph& bg, const std::vector<char>& closed, const std::vector<char>& forming);

/// Id-keyed form. Switches absent from the map are open. Throws
/// std::invalid_argument for unknown ids or non-forming-capable sources.
IslandSet islands_for(const BlockGraph& bg, const std::map<std::string, bool>& switch_closed,
                      const std::set<std::string>& forming);

}  // namespace mgrisk

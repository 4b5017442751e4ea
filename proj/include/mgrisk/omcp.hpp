/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mgrisk/block_graph.hpp"
#include "mgrisk/lindistflow.hpp"
#include "mgrisk/network.hpp"

namespace mgrisk {

enum class Controllability { no_microgrids, static_microgrids, expanding_microgrids, networking_microgrids };
enum class Objective { load_only, vulnerability_only, vulnerability_weighted };

std::string_view to_string(Controllability c);
std::string_view to_string(Objective o);
/// Accepts the CLI spellings: none|static|expanding|networking and lo|vo|vl.
std::optional<Controllability> controllability_from_string(std::string_view s);
std::optional<Objective> objective_from_string(std::string_view s);
std::string_view short_name(Controllability c);
std::string_view short_name(Objective o);

struct RiskPolicy {
    double threshold = 1.0;  // accepted fraction of total risk
    bool include_switch_risk = true;
    double total = 0.0;  // R_total
};

/// Shed-cost coefficient of a block: kW, v, or MW * v.
double block_coefficient(const LoadBlock& b, Objective obj);

/// Domain of one binary: free, or fixed to 0/1.
enum class Domain : std::int8_t { fixed_off = 0, fixed_on = 1, free = 2 };

struct InstanceOptions {
    bool include_switch_risk = true;
    /// Substation feed forced open: the substation source neither forms nor injects.
    bool substation_off = false;
};

struct OmcpInstance {
    std::shared_ptr<const NetworkModel> net;
    BlockGraph bg;
    RiskPolicy policy;
    Objective objective = Objective::vulnerability_weighted;
    Controllability controllability = Controllability::networking_microgrids;
    bool substation_off = false;
    std::vector<Domain> switch_domain;    // per switch
    std::vector<Domain> inverter_domain;  // per source (z^inv)
    std::vector<double> block_cost;       // per block, for `objective`

    std::size_t free_binaries() const;
    double budget() const { return policy.threshold * policy.total; }
    /// True when absolute risk `r` fits the budget (1e-12 relative slack).
    bool within_budget(double r) const { return r <= (policy.threshold + 1e-12) * policy.total; }
};

/// Throws std::invalid_argument for a threshold outside [0, 1] or zero total risk.
OmcpInstance make_instance(std::shared_ptr<const NetworkModel> net, BlockGraph bg, Objective obj,
                           Controllability ctrl, double threshold, const InstanceOptions& opt = {});

/// For Static/Expanding: the forming-capable source fixed on in each block
/// (largest total pmax, ties by id); nullopt for blocks without one.
std::vector<std::optional<std::size_t>> designated_sources(const NetworkModel& net, const BlockGraph& bg,
                                                           bool substation_off);

struct Configuration {
    std::vector<char> switch_closed;   // per switch
    std::vector<char> forming;         // per source
    std::vector<char> block_energized; // per block
    std::vector<Island> islands;
    DispatchSolution dispatch;
    double risk = 0.0;           // absolute
    double risk_fraction = 0.0;  // risk / R_total

    std::size_t closed_count() const;
    std::size_t energized_count() const;
};

/// R / R_total with R = energized block risk (+ closed switch risk).
double risk_of(const Configuration& c, const BlockGraph& bg, const RiskPolicy& policy);
double absolute_risk(const std::vector<char>& block_energized, const std::vector<char>& switch_closed,
                     const BlockGraph& bg, bool include_switch_risk);

struct MetricTotals {
    double served = 0.0;
    double total = 0.0;
    double shed() const { return total - served; }
    double percent() const { return total > 0 ? 100.0 * served / total : 100.0; }
};

struct ObjectiveReport {
    double shed_cost = 0.0;  // for the selected objective
    MetricTotals load_kw;
    MetricTotals vulnerability;
    MetricTotals weighted_mw;
};

ObjectiveReport objective_value(const std::vector<char>& block_energized, Objective obj, const BlockGraph& bg);

/// Shed cost summed in block order (the value the solver compares).
double shed_cost(const std::vector<char>& block_energized, const std::vector<double>& block_cost);

struct VulnerabilityStats {
    std::optional<double> served_mean;
    std::optional<double> shed_mean;
};

VulnerabilityStats vulnerability_stats(const std::vector<char>& block_energized, const BlockGraph& bg);

}  // namespace mgrisk

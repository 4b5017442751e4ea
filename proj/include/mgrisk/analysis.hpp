/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mgrisk/hazard.hpp"
#include "mgrisk/solver.hpp"

namespace mgrisk {

/// Network plus hazard data, with risk and SVI folded into the block graph.
struct Scenario {
    std::shared_ptr<const NetworkModel> net;
    BlockGraph bg;
    std::vector<std::string> warnings;
};

Scenario load_scenario(const std::filesystem::path& network, const std::filesystem::path& risk,
                       const std::filesystem::path& svi);
Scenario make_scenario(NetworkModel net, const RiskTable& risk, const SviTable& svi);

/// Thresholds from, from+step, ... up to `to`, each rounded to 1e-12.
/// Throws std::invalid_argument unless 0 <= from < to <= 1 and step > 0.
std::vector<double> sweep_thresholds(double from, double to, double step);

/// FNV-1a 64 over the switch, inverter and block states, as 16 hex digits.
std::string config_hash(const Configuration& c);
std::string config_hash(const std::vector<char>& switch_closed, const std::vector<char>& forming,
                        const std::vector<char>& block_energized);

/// 100 * served / total of the instance objective; 100 when nothing is at stake.
double served_percent(const ObjectiveReport& r, Objective obj);

struct RunSettings {
    Objective objective = Objective::vulnerability_weighted;
    Controllability controllability = Controllability::networking_microgrids;
    InstanceOptions instance;
    std::size_t threads = 0;  // 0 = hardware concurrency
    std::shared_ptr<IslandOracle> oracle;
};

struct SweepRow {
    double threshold = 0.0;
    double shed_cost = 0.0;
    double served_pct = 0.0;
    double risk_pct = 0.0;
    std::string config_hash;
    std::vector<char> block_energized;
};

struct SweepResult {
    std::vector<SweepRow> rows;  // threshold order
    std::size_t distinct = 0;    // distinct configurations
};

SweepResult run_sweep(const Scenario& sc, const std::vector<double>& thresholds, const RunSettings& rs);
void write_sweep_csv(const SweepResult& r, std::ostream& out);

struct PriorityEntry {
    int block_id = 0;
    std::map<Objective, std::size_t> steps_on;
    std::map<Objective, int> rank;
    /// rank under LoadOnly minus rank under the objective; positive means promoted.
    std::map<Objective, int> delta;
};

struct PriorityTable {
    std::vector<PriorityEntry> entries;  // block id order, substation block excluded
    std::size_t steps = 0;
};

PriorityTable priority_table(const Scenario& sc, const std::vector<double>& thresholds, const RunSettings& rs);
void write_priority_csv(const PriorityTable& t, std::ostream& out);

struct CompareRow {
    Controllability regime{};
    std::size_t blocks_on = 0;
    std::size_t blocks_total = 0;
    std::size_t switches_closed = 0;
    double risk_pct = 0.0;
    double served_pct = 0.0;
    double shed_cost = 0.0;
    VulnerabilityStats vulnerability;
};

std::vector<CompareRow> compare_regimes(const Scenario& sc, const std::vector<Controllability>& regimes,
                                        double threshold, const RunSettings& rs);
void write_compare_csv(const std::vector<CompareRow>& rows, std::ostream& out);

/// id,buses,kw,v,rho with buses joined by spaces.
void write_blocks_csv(const BlockGraph& bg, std::ostream& out);

}  // namespace mgrisk

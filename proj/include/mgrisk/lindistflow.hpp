/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <vector>

#include "mgrisk/block_graph.hpp"
#include "mgrisk/lp.hpp"
#include "mgrisk/network.hpp"

namespace mgrisk {

/// Voltage-drop sensitivities of one line over its own phase set (per unit).
struct SensitivityMatrices {
    PhaseSet phases;
    PhaseMatrix mp;
    PhaseMatrix mq;
};

/// Impedances are divided by `z_base` (ohms per unit) before use.
/// Throws std::invalid_argument for asymmetric r or x.
SensitivityMatrices build_sensitivity_matrices(const LineSegment& line, double z_base = 1.0);

inline constexpr std::size_t kNoColumn = std::numeric_limits<std::size_t>::max();

/// Per-phase column indices (kNoColumn when the element is not modeled).
using PhaseColumns = std::array<std::size_t, 3>;

struct DispatchLp {
    LpProblem lp;
    std::vector<PhaseColumns> w;      // per bus
    std::vector<PhaseColumns> p;      // per edge, NetworkModel::edges() order
    std::vector<PhaseColumns> q;
    std::vector<PhaseColumns> pg;     // per source, positive part of the injection
    std::vector<PhaseColumns> qg;
    std::vector<PhaseColumns> pgn;    // per source, negative part
    std::vector<PhaseColumns> qgn;
    std::vector<std::size_t> forming_bus;  // per energized island
};

/// Dispatch LP over the islands flagged in `energized` (one flag per island).
/// Feasibility problem; the objective minimizes total absolute source dispatch
/// so that idle islands carry no circulating flow.
DispatchLp assemble_dispatch_lp(const NetworkModel& net, const BlockGraph& bg, const std::vector<Island>& islands,
                                const std::vector<char>& energized);

struct DispatchSolution {
    bool feasible = false;
    LpStatus status = LpStatus::infeasible;
    std::vector<PhaseValues> pg;  // per source, kW
    std::vector<PhaseValues> qg;  // per source, kvar
    std::vector<PhaseValues> p;   // per edge, kW, positive from -> to
    std::vector<PhaseValues> q;   // per edge, kvar
    std::vector<PhaseValues> w;   // per bus, pu^2; zero when de-energized
    std::vector<char> bus_energized;
};

/// Solves the dispatch LP. Flows below 1e-12 pu are snapped to zero and
/// squared voltages are recomputed outward from each forming bus.
DispatchSolution solve_dispatch(const NetworkModel& net, const BlockGraph& bg, const std::vector<Island>& islands,
                                const std::vector<char>& energized, const LpOptions& opt = {});

struct DispatchResiduals {
    double voltage_drop = 0.0;  // pu^2
    double p_balance = 0.0;     // pu
    double q_balance = 0.0;     // pu
};

/// Largest residuals of the drop and balance equations on energized elements.
DispatchResiduals dispatch_residuals(const NetworkModel& net, const DispatchSolution& sol);

}  // namespace mgrisk

/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "mgrisk/omcp.hpp"

namespace mgrisk {

class SolverError : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

/// Thrown when the free binaries exceed the exact path's ceiling.
class CeilingExceeded : public SolverError {
 public:
    using SolverError::SolverError;
};

/// Memoized island dispatch feasibility. Valid for one network; safe to share
/// between threads and between instances built on that network.
class IslandOracle {
 public:
    struct Result {
        LpStatus status = LpStatus::infeasible;
        DispatchSolution dispatch;
    };

    explicit IslandOracle(std::shared_ptr<const NetworkModel> net) : net_(std::move(net)) {}

    std::shared_ptr<const Result> evaluate(const BlockGraph& bg, const Island& island);
    std::size_t lp_solves() const;
    std::size_t cache_size() const;

 private:
    using Key = std::tuple<std::size_t, std::vector<std::size_t>, std::vector<std::size_t>>;
    std::shared_ptr<const NetworkModel> net_;
    mutable std::mutex mu_;
    std::map<Key, std::shared_ptr<const Result>> cache_;
    std::size_t solves_ = 0;
};

struct SolveOptions {
    std::size_t max_binaries = 40;
    bool pruning = true;
    std::shared_ptr<IslandOracle> oracle;  // created per solve when null
};

struct SolveReport {
    Configuration best;
    bool optimal = false;
    double shed_cost = 0.0;
    ObjectiveReport metrics;
    VulnerabilityStats vulnerability;
    std::size_t nodes = 0;
    std::size_t leaves = 0;
    std::size_t topologies_evaluated = 0;  // distinct switch patterns reaching a leaf
    std::size_t lp_solves = 0;
    double wall_seconds = 0.0;
    std::vector<std::string> diagnostics;
};

/// Exact branch and bound over free switch then inverter binaries.
SolveReport solve(const OmcpInstance& inst, const SolveOptions& opt = {});

struct EnumeratedConfiguration {
    std::vector<char> switch_closed;
    std::vector<char> forming;
    std::vector<char> block_energized;
    double risk = 0.0;
    double shed_cost = 0.0;
};

struct Enumeration {
    std::vector<EnumeratedConfiguration> configurations;  // every admissible one
    std::size_t topologies = 0;  // switch patterns evaluated
    std::size_t best = 0;        // index of the minimum under the solver's tie order
};

/// Exhaustive oracle: every admissible (z^sw, z^inv) pair and every
/// energization of its energizable islands. At most 20 free binaries.
Enumeration enumerate_all(const OmcpInstance& inst, std::shared_ptr<IslandOracle> oracle = nullptr);

/// Strict total order used to pick among equal-cost optima.
bool configuration_less(const EnumeratedConfiguration& a, const EnumeratedConfiguration& b, double cost_tol);

/// Cost tolerance for an instance: 1e-9 * (1 + sum of block costs).
double cost_tolerance(const OmcpInstance& inst);

}  // namespace mgrisk

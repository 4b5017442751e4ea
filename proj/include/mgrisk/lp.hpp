/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mgrisk {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class LpStatus { optimal, infeasible, unbounded, numerical_failure };

std::string_view to_string(LpStatus s);

enum class LpSense { minimize, maximize };

struct LpRow {
    std::vector<std::pair<std::size_t, double>> coefs;  // (column, value)
    double lower = -kInf;
    double upper = kInf;
    std::string name;
};

/// lower <= A x <= upper, col_lower <= x <= col_upper, optimize cost . x
struct LpProblem {
    LpSense sense = LpSense::minimize;
    std::vector<double> cost;
    std::vector<double> col_lower;
    std::vector<double> col_upper;
    std::vector<std::string> col_names;
    std::vector<LpRow> rows;

    std::size_t num_cols() const { return cost.size(); }
    std::size_t num_rows() const { return rows.size(); }

    std::size_t add_column(double lower, double upper, double c = 0.0, std::string name = {});
    std::size_t add_row(std::vector<std::pair<std::size_t, double>> coefs, double lower, double upper,
                        std::string name = {});
};

struct LpSolution {
    LpStatus status = LpStatus::numerical_failure;
    double objective = 0.0;
    std::vector<double> x;
    std::vector<double> row_activity;
    std::size_t iterations = 0;
    /// Largest scaled bound or row violation of `x`; meaningful when optimal.
    double max_violation = 0.0;
};

struct LpOptions {
    double feasibility_tol = 1e-9;
    double optimality_tol = 1e-9;
    double pivot_tol = 1e-9;
    /// Accepted scaled violation of the returned point.
    double residual_tol = 1e-7;
    std::size_t max_iterations = 0;  // 0: automatic
};

/// Two-phase bounded-variable primal simplex on a dense tableau.
/// Deterministic for identical input.
LpSolution solve_lp(const LpProblem& p, const LpOptions& opt = {});

}  // namespace mgrisk
